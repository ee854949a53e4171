"""Command-line front end.

Every subcommand renders one dataset (a sweep, a cross-check, a Monte
Carlo campaign, or the headline numbers) as CSV or JSON.  Output is
byte-stable for a given seed: floats print through a fixed %.17g
format, rows keep a fixed order, and all randomness flows from the
--seed flag.

Exit codes: 0 success, 1 usage error, 2 invalid parameter value,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .catstate import loss_budget, max_photon_number, optimal_lambda, sweep_loss_vs_coupling
from .cavity import CavityParams, DetuningSet, QubitBranch, output_amplitudes
from .errors import NumericalError, ParameterError
from .montecarlo import MonteCarloConfig, power_law_study, run_monte_carlo
from .overlap import Polarization, pair_overlap_projected
from .roundtrip import convergence_study
from .steady import solve_steady_state, spontaneous_amplitude

_COMMANDS = ("amplitudes", "figure2", "figure3", "figure4", "headline", "xcheck", "mc")

_POLARIZATIONS = {
    "circular": Polarization.circular,
    "linear_x": lambda: Polarization.linear((1.0, 0.0, 0.0)),
    "linear_y": lambda: Polarization.linear((0.0, 1.0, 0.0)),
    "linear_z": lambda: Polarization.linear((0.0, 0.0, 1.0)),
}


@dataclass(frozen=True)
class RunConfig:
    """Global plumbing shared by all subcommands."""

    command: str
    seed: int
    out: str | None
    fmt: str


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this tool reserves 2 for
    # invalid parameter values, so usage errors remap to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _seed_value(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    return value


def _geom_grid(text: str) -> np.ndarray:
    """Parse 'start:stop:num' into a geometric grid."""
    start, stop, num = text.split(":")
    return np.geomspace(float(start), float(stop), int(num))


def _linear_grid(text: str) -> np.ndarray:
    """Parse 'start:stop:num' into a linear grid."""
    start, stop, num = text.split(":")
    return np.linspace(float(start), float(stop), int(num))


def _int_grid(text: str) -> list[int]:
    """Parse 'lo:hi' (inclusive) or a comma list of atom numbers."""
    if ":" in text:
        lo, hi = text.split(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",")]


def _float_triple(text: str) -> tuple[float, float, float]:
    parts = [float(part) for part in text.split(",")]
    if len(parts) != 3:
        raise ValueError("expected three comma-separated values")
    return (parts[0], parts[1], parts[2])


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",")]


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def _jsonable(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def _render_csv(table: dict) -> str:
    names = table["names"]
    lines = [",".join(names)]
    for row in table["rows"]:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _kv_table(results: dict) -> dict:
    return {"names": ["key", "value"], "rows": list(results.items())}


def _meta(run: RunConfig) -> dict:
    return {"command": run.command, "seed": run.seed, "version": __version__}


def _emit(
    run: RunConfig,
    table: dict | None = None,
    results: dict | None = None,
    extras: dict | None = None,
) -> None:
    """Write the payload in the chosen format.

    ``table`` is a column table, ``results`` a flat key-value block
    (rendered as a two-column table in CSV), and ``extras`` holds
    blocks such as fit summaries that only appear in JSON output.
    """
    if run.fmt == "csv":
        text = _render_csv(table if table is not None else _kv_table(results or {}))
    else:
        payload: dict = {"meta": _meta(run)}
        if table is not None:
            payload["columns"] = {
                name: [_jsonable(row[i]) for row in table["rows"]]
                for i, name in enumerate(table["names"])
            }
        if results is not None:
            payload["results"] = _jsonable(results)
        for key, value in (extras or {}).items():
            payload[key] = _jsonable(value)
        text = json.dumps(payload, indent=2) + "\n"
    if run.out is None or run.out == "-":
        sys.stdout.write(text)
    else:
        with open(run.out, "w", newline="") as fh:
            fh.write(text)


def _write_fit(run: RunConfig, path: str, fit: dict) -> None:
    payload = {"meta": _meta(run), "fit": _jsonable(fit)}
    with open(path, "w", newline="") as fh:
        fh.write(json.dumps(payload, indent=2) + "\n")


def _branches(choice: str) -> list[QubitBranch]:
    if choice == "up":
        return [QubitBranch.UP]
    if choice == "dn":
        return [QubitBranch.DOWN]
    return [QubitBranch.UP, QubitBranch.DOWN]


def cmd_amplitudes(run: RunConfig, args) -> None:
    params = CavityParams.from_coupling_strength(
        args.eta_esc, args.cooperativity, args.lambda_dn
    )
    rows = []
    for branch in _branches(args.branch):
        amps = output_amplitudes(params, branch, args.alpha_in)
        rows.append(
            [
                branch.value,
                amps.r.real,
                amps.r.imag,
                amps.a.real,
                amps.a.imag,
                amps.m.real,
                amps.m.imag,
                amps.energy_residual,
            ]
        )
    table = {
        "names": [
            "branch",
            "r_re",
            "r_im",
            "a_re",
            "a_im",
            "m_re",
            "m_im",
            "energy_residual",
        ],
        "rows": rows,
    }
    _emit(run, table)


def cmd_figure2(run: RunConfig, args) -> None:
    sweep = sweep_loss_vs_coupling(args.eta_esc, args.cooperativity, args.lambda_grid)
    names = list(sweep)
    rows = [
        [sweep[name][i] for name in names] for i in range(len(args.lambda_grid))
    ]
    _emit(run, {"names": names, "rows": rows})


def cmd_figure3(run: RunConfig, args) -> None:
    rows = []
    for projection in args.projections:
        values = pair_overlap_projected(args.kx_grid, projection)
        for kx, v in zip(args.kx_grid, np.atleast_1d(values)):
            rows.append([kx, projection, v])
    _emit(run, {"names": ["kx", "projection", "v"], "rows": rows})


def cmd_figure4(run: RunConfig, args) -> None:
    config = MonteCarloConfig(
        sigmas=args.sigmas,
        wavelength=args.wavelength,
        polarization=_POLARIZATIONS[args.polarization](),
        seed=run.seed,
        isotropic=args.isotropic,
        workers=args.workers,
    )
    study = power_law_study(config, args.n_grid, args.runs_budget)
    rows = [
        [int(study.n_atoms[i]), study.b_mean[i], study.b_sem[i], int(study.runs[i])]
        for i in range(study.n_atoms.size)
    ]
    table = {"names": ["n_atoms", "b_mean", "b_sem", "runs"], "rows": rows}
    fit = {
        "c3": study.c3,
        "c3_err": study.c3_err,
        "free_slope": study.free_slope,
    }
    _emit(run, table=table, extras={"fit": fit})
    if args.fit_out:
        _write_fit(run, args.fit_out, fit)


def cmd_headline(run: RunConfig, args) -> None:
    params = CavityParams.from_coupling_strength(
        args.eta_esc, args.cooperativity, max(1.0, args.cooperativity)
    )
    if args.lambda_inf:
        eta = params.eta_esc * params.cooperativity / (params.cooperativity + 1.0)
        results = {
            "eta": eta,
            "l_gen": 1.0 - eta,
            "l_cav": 1.0 - eta**2,
            "l_ell": eta * (1.0 - eta),
        }
        _emit(run, results=results)
        return
    budget = loss_budget(params)
    if params.eta_esc == 1.0 and params.cooperativity >= 1.0:
        alpha_sq: float | str = "unbounded"
    else:
        alpha_sq = max_photon_number(params, args.visibility_ratio)
    results = {
        "lambda_opt": optimal_lambda(params),
        "l_gen": budget.l_gen,
        "l_cav": budget.l_cav,
        "alpha_out_sq_at_ratio": alpha_sq,
        "a_mode": budget.a_mode,
        "l_gen_ratio": budget.l_gen / (1.0 - budget.l_gen),
    }
    _emit(run, results=results)


def cmd_xcheck(run: RunConfig, args) -> None:
    params = CavityParams.from_coupling_strength(
        args.eta_esc, args.cooperativity, args.lambda_dn
    )
    study = convergence_study(params, args.finesse_grid)
    det = DetuningSet.resonant()
    steady_err = 0.0
    for branch in QubitBranch:
        exact = output_amplitudes(params, branch, 1.0)
        ss = solve_steady_state(params, det, branch, 1.0)
        steady_err = max(
            steady_err,
            abs(ss.e_out - exact.r),
            abs(ss.e_mirror - exact.m),
            abs(spontaneous_amplitude(ss) - abs(exact.a)),
        )
    rows = [
        [study.finesse[i], study.max_error[i], steady_err]
        for i in range(study.finesse.size)
    ]
    table = {
        "names": ["finesse", "semiclassical_error", "steady_state_error"],
        "rows": rows,
    }
    fit = {"slope": study.slope}
    _emit(run, table=table, extras={"fit": fit})
    if args.fit_out:
        _write_fit(run, args.fit_out, fit)


def cmd_mc(run: RunConfig, args) -> None:
    config = MonteCarloConfig(
        n_atoms=args.n_atoms,
        sigmas=args.sigmas,
        wavelength=args.wavelength,
        polarization=_POLARIZATIONS[args.polarization](),
        n_runs=args.n_runs,
        seed=run.seed,
        isotropic=args.isotropic,
        workers=args.workers,
    )
    result = run_monte_carlo(config)
    results = {
        "n_atoms": config.n_atoms,
        "n_runs": config.n_runs,
        "isotropic": config.isotropic,
        **result.summary(),
    }
    _emit(run, results=results)


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=_seed_value, default=0)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--config", default=None, help=argparse.SUPPRESS)

    parser = _Parser(prog="rydcat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("amplitudes", parents=[common])
    p.add_argument("--eta-esc", type=float, default=0.9825)
    p.add_argument("--cooperativity", type=float, default=21.0)
    p.add_argument("--lambda-dn", type=float, default=21.0)
    p.add_argument("--alpha-in", type=complex, default=1.0 + 0.0j)
    p.add_argument("--branch", choices=("up", "dn", "both"), default="both")
    p.set_defaults(func=cmd_amplitudes)

    p = sub.add_parser("figure2", parents=[common])
    p.add_argument("--eta-esc", type=float, default=0.9825)
    p.add_argument("--cooperativity", type=float, default=21.0)
    p.add_argument("--lambda-grid", type=_geom_grid, default="1:1000:400")
    p.set_defaults(func=cmd_figure2)

    p = sub.add_parser("figure3", parents=[common])
    p.add_argument("--kx-grid", type=_linear_grid, default="0:50:501")
    p.add_argument(
        "--projections", type=_float_list, default="0,0.7071067811865476,1"
    )
    p.set_defaults(func=cmd_figure3)

    p = sub.add_parser("figure4", parents=[common])
    p.add_argument("--n-grid", type=_int_grid, default="3:30")
    p.add_argument("--runs-budget", type=float, default=1e5)
    p.add_argument("--sigmas", type=_float_triple, default="3.3,4.5,1.7")
    p.add_argument("--wavelength", type=float, default=0.78)
    p.add_argument(
        "--polarization", choices=sorted(_POLARIZATIONS), default="circular"
    )
    p.add_argument("--isotropic", action="store_true")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--fit-out", default=None)
    p.set_defaults(func=cmd_figure4)

    p = sub.add_parser("headline", parents=[common])
    p.add_argument("--eta-esc", type=float, default=0.9825)
    p.add_argument("--cooperativity", type=float, default=21.0)
    p.add_argument("--visibility-ratio", type=float, default=math.exp(-1.0))
    p.add_argument("--lambda-inf", action="store_true")
    p.set_defaults(func=cmd_headline)

    p = sub.add_parser("xcheck", parents=[common])
    p.add_argument("--eta-esc", type=float, default=0.9825)
    p.add_argument("--cooperativity", type=float, default=21.0)
    p.add_argument("--lambda-dn", type=float, default=21.0)
    p.add_argument("--finesse-grid", type=_geom_grid, default="1e2:1e6:5")
    p.add_argument("--fit-out", default=None)
    p.set_defaults(func=cmd_xcheck)

    p = sub.add_parser("mc", parents=[common])
    p.add_argument("--n-atoms", type=int, default=260)
    p.add_argument("--sigmas", type=_float_triple, default="3.3,4.5,1.7")
    p.add_argument("--wavelength", type=float, default=0.78)
    p.add_argument(
        "--polarization", choices=sorted(_POLARIZATIONS), default="circular"
    )
    p.add_argument("--n-runs", type=int, default=100)
    p.add_argument("--isotropic", action="store_true")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_mc)
    return parser


def _allowed_options(parser: _Parser) -> dict[str, set[str]]:
    allowed: dict[str, set[str]] = {}
    choices = parser._subparsers._group_actions[0].choices
    for name, sub in choices.items():
        opts = set()
        for action in sub._actions:
            opts.update(action.option_strings)
        allowed[name] = opts
    return allowed


def _load_config_args(path: str, allowed: set[str]) -> list[str]:
    """Turn a key=value config file into an argv fragment."""
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ParameterError(f"cannot read config file: {exc}") from exc
    fragment: list[str] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(
                f"{path}:{lineno}: expected key=value, got {line!r}"
            )
        key, value = (part.strip() for part in line.split("=", 1))
        option = "--" + key.replace("_", "-")
        if option == "--config" or option not in allowed:
            raise ParameterError(f"{path}:{lineno}: unknown config key {key!r}")
        lowered = value.lower()
        if lowered in ("true", "false"):
            if lowered == "true":
                fragment.append(option)
            continue
        fragment.extend([option, value])
    return fragment


def _splice_config(argv: list[str], parser: _Parser) -> list[str]:
    """Insert config-file options right after the subcommand.

    Explicit command-line flags come later in argv, so they win over
    the config file.
    """
    command_index = None
    for i, token in enumerate(argv):
        if token in _COMMANDS:
            command_index = i
            break
    if command_index is None:
        return argv
    path = None
    cleaned = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token == "--config":
            if i + 1 >= len(argv):
                parser.error("argument --config: expected one argument")
            path = argv[i + 1]
            i += 2
            continue
        if token.startswith("--config="):
            path = token.split("=", 1)[1]
            i += 1
            continue
        cleaned.append(token)
        i += 1
    if path is None:
        return argv
    command = argv[command_index]
    fragment = _load_config_args(path, _allowed_options(parser)[command])
    out_index = cleaned.index(command) + 1
    return cleaned[:out_index] + fragment + cleaned[out_index:]


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        argv = _splice_config(list(argv), parser)
        args = parser.parse_args(argv)
        run = RunConfig(
            command=args.command, seed=args.seed, out=args.out, fmt=args.format
        )
        args.func(run, args)
    except ParameterError as exc:
        print(f"rydcat: invalid parameter: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"rydcat: numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())

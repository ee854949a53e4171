"""Monte Carlo sampling of collective overlaps over random clouds.

Draws Gaussian atom clouds, reduces each to its collective branch
overlap and pair statistics, and aggregates means with standard errors.
Each run owns a counter-based generator keyed by (master seed, run
index), so results are bit-reproducible for a given seed regardless of
how many worker threads execute the runs or in which order they finish.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, replace

import numpy as np

from .errors import ParameterError
from .overlap import (
    AtomCloud,
    Polarization,
    collective_from_matrix,
    overlap_matrix,
    pair_statistics,
)

_WORKERS_ENV = "RYDCAT_WORKERS"


@dataclass(frozen=True)
class MonteCarloConfig:
    """Cloud geometry and sampling plan.

    ``isotropic`` replaces the three widths by their geometric mean,
    keeping the scaled cloud size fixed.  ``workers`` of None defers to
    the RYDCAT_WORKERS environment variable, defaulting to 1.
    """

    n_atoms: int = 260
    sigmas: tuple[float, float, float] = (3.3, 4.5, 1.7)
    wavelength: float = 0.78
    polarization: Polarization | None = None
    direction: tuple[float, float, float] = (0.0, 0.0, -1.0)
    n_runs: int = 100
    seed: int = 0
    isotropic: bool = False
    workers: int | None = None

    def __post_init__(self):
        if self.n_atoms < 2:
            raise ParameterError(f"n_atoms must be >= 2, got {self.n_atoms!r}")
        if self.n_runs < 2:
            raise ParameterError(f"n_runs must be >= 2, got {self.n_runs!r}")
        if self.wavelength <= 0.0:
            raise ParameterError(
                f"wavelength must be > 0, got {self.wavelength!r}"
            )
        if len(self.sigmas) != 3 or any(s <= 0.0 for s in self.sigmas):
            raise ParameterError("sigmas must be three positive lengths")
        if not 0 <= self.seed < 2**64:
            raise ParameterError("seed must fit in an unsigned 64-bit integer")
        if self.workers is not None and self.workers < 1:
            raise ParameterError(f"workers must be >= 1, got {self.workers!r}")
        if self.polarization is None:
            object.__setattr__(self, "polarization", Polarization.circular())

    @property
    def effective_sigmas(self) -> tuple[float, float, float]:
        if not self.isotropic:
            return self.sigmas
        mean_sigma = float(np.cbrt(np.prod(np.asarray(self.sigmas))))
        return (mean_sigma, mean_sigma, mean_sigma)

    def resolve_workers(self) -> int:
        if self.workers is not None:
            return self.workers
        try:
            workers = int(os.environ.get(_WORKERS_ENV, "1"))
        except ValueError:
            workers = 1
        return max(1, workers)


def _run_key(seed: int, run: int) -> np.ndarray:
    return np.array([seed, run], dtype=np.uint64)


def _single_run(config: MonteCarloConfig, key: np.ndarray):
    rng = np.random.Generator(np.random.Philox(key=key))
    cloud = AtomCloud.sample(
        config.n_atoms,
        config.effective_sigmas,
        config.wavelength,
        rng,
        config.direction,
    )
    matrix = overlap_matrix(cloud, config.polarization)
    coll = collective_from_matrix(matrix)
    pair_mean, pair_mean_sq = pair_statistics(matrix)
    return coll.b_up_dn, coll.c_up_dn, pair_mean, pair_mean_sq


def _collect_runs(config: MonteCarloConfig, keys: list[np.ndarray]) -> list:
    results: list = [None] * len(keys)
    workers = config.resolve_workers()
    if workers == 1 or len(keys) == 1:
        for i, key in enumerate(keys):
            results[i] = _single_run(config, key)
        return results
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {
            pool.submit(_single_run, config, key): i for i, key in enumerate(keys)
        }
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    return results


def _sem(values: np.ndarray) -> float:
    return float(np.std(values, ddof=1) / np.sqrt(values.size))


@dataclass(frozen=True, eq=False)
class MonteCarloResult:
    """Per-run observables of one sampling campaign."""

    config: MonteCarloConfig
    b: np.ndarray
    c_up_dn: np.ndarray
    s12: np.ndarray
    s12_sq: np.ndarray

    @property
    def b_mean(self) -> float:
        return float(self.b.mean())

    @property
    def b_sem(self) -> float:
        return _sem(self.b)

    @property
    def c_mean(self) -> complex:
        return complex(self.c_up_dn.mean())

    @property
    def c_sem_im(self) -> float:
        return _sem(self.c_up_dn.imag)

    @property
    def s12_mean(self) -> complex:
        return complex(self.s12.mean())

    @property
    def s12_sem_re(self) -> float:
        return _sem(self.s12.real)

    @property
    def s12_sem_im(self) -> float:
        return _sem(self.s12.imag)

    @property
    def rms(self) -> float:
        return float(np.sqrt(self.s12_sq.mean()))

    @property
    def rms_sem(self) -> float:
        # Delta method through the square root.
        return _sem(self.s12_sq) / (2.0 * self.rms)

    def summary(self) -> dict[str, float]:
        return {
            "b_mean": self.b_mean,
            "b_sem": self.b_sem,
            "c_mean_re": self.c_mean.real,
            "c_mean_im": self.c_mean.imag,
            "c_sem_im": self.c_sem_im,
            "s12_mean_re": self.s12_mean.real,
            "s12_mean_im": self.s12_mean.imag,
            "s12_sem_re": self.s12_sem_re,
            "s12_sem_im": self.s12_sem_im,
            "rms": self.rms,
            "rms_sem": self.rms_sem,
        }


def run_monte_carlo(config: MonteCarloConfig) -> MonteCarloResult:
    """Sample the configured ensemble and collect per-run observables."""
    keys = [_run_key(config.seed, run) for run in range(config.n_runs)]
    rows = _collect_runs(config, keys)
    b = np.array([row[0] for row in rows])
    c = np.array([row[1] for row in rows], dtype=complex)
    s12 = np.array([row[2] for row in rows], dtype=complex)
    s12_sq = np.array([row[3] for row in rows])
    return MonteCarloResult(config=config, b=b, c_up_dn=c, s12=s12, s12_sq=s12_sq)


@dataclass(frozen=True, eq=False)
class PowerLawStudy:
    """Mean mismatch vs atom number with an inverse-cube fit.

    The fit holds the exponent at -3 and estimates the coefficient by
    inverse-variance weighting, which leans on the large-atom-number
    points where the pure power law is accurate.  ``free_slope`` refits
    with the exponent free as a shape diagnostic.
    """

    n_atoms: np.ndarray
    b_mean: np.ndarray
    b_sem: np.ndarray
    runs: np.ndarray
    c3: float
    c3_err: float
    free_slope: float

    def extrapolate(self, n_atoms: float) -> float:
        return self.c3 / float(n_atoms) ** 3


def power_law_study(
    config: MonteCarloConfig,
    n_grid=None,
    runs_budget: float = 1e5,
) -> PowerLawStudy:
    """Scan the mean mismatch over atom number and fit the decay.

    The run count per point is ``runs_budget / N**2``, which roughly
    equalizes the relative error across the grid since the per-run
    spread of the mismatch shrinks with N.  Streams are keyed by
    (seed, N, run), so different grid points never share draws.
    """
    if n_grid is None:
        n_grid = range(3, 31)
    n_values = [int(n) for n in n_grid]
    if len(n_values) < 2:
        raise ParameterError("n_grid must contain at least two atom numbers")
    if any(n < 2 for n in n_values):
        raise ParameterError("atom numbers must be >= 2")
    if any(n >= 2**32 for n in n_values):
        raise ParameterError("atom numbers must fit in 32 bits for stream keying")
    if runs_budget <= 0.0:
        raise ParameterError(f"runs_budget must be > 0, got {runs_budget!r}")
    b_mean = np.empty(len(n_values))
    b_sem = np.empty(len(n_values))
    runs = np.empty(len(n_values), dtype=int)
    for i, n in enumerate(n_values):
        n_runs = max(2, round(runs_budget / n**2))
        point = replace(config, n_atoms=n, n_runs=n_runs)
        keys = [
            np.array([config.seed, (n << 32) + run], dtype=np.uint64)
            for run in range(n_runs)
        ]
        rows = _collect_runs(point, keys)
        b = np.array([row[0] for row in rows])
        b_mean[i] = b.mean()
        b_sem[i] = _sem(b)
        runs[i] = n_runs
    n_arr = np.array(n_values, dtype=float)
    design = n_arr**-3
    weight = 1.0 / b_sem**2
    gram = float(np.sum(weight * design**2))
    c3 = float(np.sum(weight * b_mean * design) / gram)
    c3_err = float(np.sqrt(1.0 / gram))
    free_slope = float(
        np.polyfit(np.log(n_arr), np.log(b_mean), 1, w=b_mean / b_sem)[0]
    )
    return PowerLawStudy(
        n_atoms=np.array(n_values),
        b_mean=b_mean,
        b_sem=b_sem,
        runs=runs,
        c3=c3,
        c3_err=c3_err,
        free_slope=free_slope,
    )

"""Cat states of reflected light and the losses that decohere them.

A cat state here is a qubit-correlated pair of coherent amplitudes
``(alpha_up, alpha_dn)`` together with the weight ``f`` of the blockaded
branch, the coherence phase ``theta``, and the visibility ``V`` of the
qubit-light coherence.  Light lost to the environment (atomic scattering,
mirror transmission, mode mismatch, downstream beam splitters) carries
which-branch information; tracing it out multiplies the visibility by the
magnitude of the overlap of the lost environment states and shifts the
phase by its argument.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .cavity import CavityParams, QubitBranch, lambda_factor, output_amplitudes
from .errors import ParameterError


def coherent_overlap(a: complex, b: complex) -> complex:
    """Inner product <a|b> of two coherent states."""
    return cmath.exp(-0.5 * abs(a) ** 2 - 0.5 * abs(b) ** 2 + a.conjugate() * b)


@dataclass(frozen=True)
class CatState:
    """Qubit-correlated superposition of two coherent states.

    ``theta`` is wrapped into [-pi, pi] on construction.
    """

    f: float
    theta: float
    visibility: float
    alpha_up: complex
    alpha_dn: complex

    def __post_init__(self):
        if not 0.0 <= self.f <= 1.0:
            raise ParameterError(f"f must be in [0, 1], got {self.f!r}")
        if not 0.0 <= self.visibility <= 1.0:
            raise ParameterError(
                f"visibility must be in [0, 1], got {self.visibility!r}"
            )
        object.__setattr__(self, "theta", math.remainder(self.theta, math.tau))


@dataclass(frozen=True)
class LostFields:
    """Per-branch amplitudes of the two loss channels during generation."""

    a_up: complex
    a_dn: complex
    m_up: complex
    m_dn: complex


@dataclass(frozen=True)
class LossBudget:
    """Decoherence bookkeeping for cat generation.

    ``l_cav`` measures the reduction of the effective cat size by the
    cavity, ``l_a``/``l_m``/``l_mode`` the visibility decay rates (per
    incoming mean photon number) from atomic scattering, mirror loss, and
    radiated-mode mismatch, ``l_ell`` their sum, and ``l_gen`` the
    visibility decay per generated cat size, the figure of merit.
    ``a_mode`` is the prefactor that converts a mode-mismatch amount into
    ``l_mode``.
    """

    l_cav: float
    l_a: float
    l_m: float
    l_mode: float
    l_ell: float
    l_gen: float
    a_mode: float

    def __post_init__(self):
        for name in ("l_cav", "l_a", "l_m", "l_mode", "l_ell", "l_gen", "a_mode"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ParameterError(f"{name} must be in [0, 1], got {value!r}")
        if abs(self.l_ell - (self.l_a + self.l_m + self.l_mode)) > 1e-12:
            raise ParameterError("l_ell must equal l_a + l_m + l_mode")


def effective_size(cat: CatState) -> float:
    """Half-separation of the two coherent amplitudes.

    A common displacement of both amplitudes is removable by local
    operations, so only the separation counts as cat size.
    """
    return 0.5 * abs(cat.alpha_up - cat.alpha_dn)


def apply_beam_splitter(cat: CatState, loss: float) -> CatState:
    """Propagate a cat through a beam splitter with intensity loss.

    The transmitted amplitudes shrink by sqrt(1 - loss); the reflected
    (lost) coherent states overlap imperfectly between the branches,
    which multiplies the visibility and shifts the phase.
    """
    if not 0.0 <= loss <= 1.0:
        raise ParameterError(f"loss must be in [0, 1], got {loss!r}")
    t_amp = math.sqrt(1.0 - loss)
    r_amp = math.sqrt(loss)
    gone = coherent_overlap(r_amp * cat.alpha_up, r_amp * cat.alpha_dn)
    return CatState(
        f=cat.f,
        theta=cat.theta + cmath.phase(gone),
        # |gone| <= 1 up to rounding; clamp so the constructor's range
        # check never trips on a few ulp of overshoot
        visibility=min(1.0, cat.visibility * abs(gone)),
        alpha_up=t_amp * cat.alpha_up,
        alpha_dn=t_amp * cat.alpha_dn,
    )


def generate_cat(
    params: CavityParams,
    f: float,
    v0: float,
    theta0: float,
    alpha_in: complex,
    radiated_mode_overlap: complex = 1.0,
) -> tuple[CatState, LostFields]:
    """Reflect a coherent pulse off the cavity and form the cat.

    The qubit is prepared with blockaded-branch weight ``f``, initial
    coherence visibility ``v0`` and phase ``theta0``.  Reflection maps
    the input amplitude onto branch-dependent amplitudes; the scattered
    and mirror-lost fields decohere the pair.

    ``radiated_mode_overlap`` optionally dresses the scattered-light
    overlap with the collective radiated-mode overlap of the two branches
    (magnitude below one reduces visibility, a phase rotates ``theta``).
    The default of exactly 1 means identical radiated modes.
    """
    if not 0.0 <= v0 <= 1.0:
        raise ParameterError(f"v0 must be in [0, 1], got {v0!r}")
    if abs(radiated_mode_overlap) > 1.0 + 1e-12:
        raise ParameterError("radiated_mode_overlap magnitude cannot exceed 1")
    up = output_amplitudes(params, QubitBranch.UP, alpha_in)
    dn = output_amplitudes(params, QubitBranch.DOWN, alpha_in)
    # Scattered light: <a_up|a_dn> with the cross term dressed by the
    # radiated-mode overlap.  Mirror loss channels share one mode.
    gone_a = cmath.exp(
        -0.5 * abs(up.a) ** 2
        - 0.5 * abs(dn.a) ** 2
        + up.a.conjugate() * radiated_mode_overlap * dn.a
    )
    gone_m = coherent_overlap(up.m, dn.m)
    gone = gone_a * gone_m
    cat = CatState(
        f=f,
        theta=theta0 + cmath.phase(gone),
        visibility=min(1.0, v0 * abs(gone)),
        alpha_up=up.r,
        alpha_dn=dn.r,
    )
    return cat, LostFields(a_up=up.a, a_dn=dn.a, m_up=up.m, m_dn=dn.m)


# Closed forms for the loss budget, in terms of the escape efficiency e,
# the cooperativity c, and the transparent-branch coupling strength lam.

def _eta(e: float, c: float) -> float:
    return e * c / (c + 1.0)


def _l_cav(e: float, c: float, lam: float) -> float:
    return 1.0 - (_eta(e, c) * (lam**2 - 1.0) / (lam**2 + c)) ** 2


def _l_a(e: float, c: float, lam: float) -> float:
    return _eta(e, c) / (c + 1.0) * ((lam - c) * (lam - 1.0) / (lam**2 + c)) ** 2


def _l_m(e: float, c: float, lam: float) -> float:
    return (1.0 - e) / e * (_eta(e, c) * (lam**2 - 1.0) / (lam**2 + c)) ** 2


def _a_mode(e: float, c: float, lam: float) -> float:
    return 2.0 * e * c * lam / ((1.0 + c) * (lam**2 + c))


def _l_gen_closed(e: float, c: float, lam: float) -> float:
    return 1.0 - _eta(e, c) * (lam + 1.0) ** 2 / (lam**2 + c)


def loss_budget(params: CavityParams, b_mode: float = 0.0) -> LossBudget:
    """Full decoherence budget of cat generation.

    Parameters
    ----------
    params:
        Cavity parameters; the transparent-branch coupling strength is
        derived from them.
    b_mode:
        Radiated-mode mismatch, one minus the real part of the collective
        mode overlap of the two branches.  Lies in [0, 2]; 0 means the
        branches radiate into the same mode.
    """
    if not 0.0 <= b_mode <= 2.0:
        raise ParameterError(f"b_mode must be in [0, 2], got {b_mode!r}")
    if params.cooperativity == 0.0:
        raise ParameterError("loss budget needs cooperativity > 0")
    e = params.eta_esc
    c = params.cooperativity
    lam = lambda_factor(params, QubitBranch.DOWN)
    l_cav = _l_cav(e, c, lam)
    l_a = _l_a(e, c, lam)
    l_m = _l_m(e, c, lam)
    a_mode = _a_mode(e, c, lam)
    l_mode = a_mode * b_mode
    l_ell = l_a + l_m + l_mode
    survival = 1.0 - l_cav + l_ell
    if survival == 0.0:
        # Removable 0/0 at lam = 1 with no mode mismatch; use the limit.
        l_gen = _l_gen_closed(e, c, lam)
    else:
        l_gen = l_ell / survival
    return LossBudget(
        l_cav=l_cav,
        l_a=l_a,
        l_m=l_m,
        l_mode=l_mode,
        l_ell=l_ell,
        l_gen=l_gen,
        a_mode=a_mode,
    )


def optimal_lambda(params: CavityParams) -> float:
    """Coupling strength that minimizes the generation loss.

    The interior minimum sits where the coupling strength equals the
    cooperativity.  For cooperativity below 1 that point is outside the
    reachable range (the coupling strength is at least 1) and the loss
    grows monotonically from the boundary, so the boundary wins.
    """
    if params.cooperativity == 0.0:
        raise ParameterError("optimal coupling strength needs cooperativity > 0")
    return max(1.0, params.cooperativity)


def max_photon_number(params: CavityParams, visibility_ratio: float) -> float:
    """Largest cat size (mean photon number) before visibility drops too far.

    Evaluated at the optimal coupling strength, where the generation
    loss reduces to 1 - eta_esc for cooperativity of at least 1.
    ``visibility_ratio`` is the acceptable output/input visibility
    ratio, e.g. 1/e.
    """
    if not 0.0 < visibility_ratio < 1.0:
        raise ParameterError(
            f"visibility_ratio must be in (0, 1), got {visibility_ratio!r}"
        )
    if params.cooperativity == 0.0:
        raise ParameterError("cat generation needs cooperativity > 0")
    lam = max(1.0, params.cooperativity)
    l_gen = _l_gen_closed(params.eta_esc, params.cooperativity, lam)
    if l_gen == 0.0:
        raise ParameterError(
            "generation loss vanishes at eta_esc = 1: photon number unbounded"
        )
    return -math.log(visibility_ratio) * (1.0 - l_gen) / (2.0 * l_gen)


def sweep_loss_vs_coupling(
    eta_esc: float, cooperativity: float, lambda_grid
) -> dict[str, np.ndarray]:
    """Loss budget and scattered amplitudes across coupling strengths.

    Returns columns keyed for direct CSV export: the grid itself, the
    three loss coefficients, and the scattered-light amplitudes of both
    branches per unit input.
    """
    grid = np.asarray(lambda_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ParameterError("lambda_grid must be a nonempty 1-D array")
    if np.any(grid < 1.0):
        raise ParameterError("lambda_grid values must be >= 1")
    rows = {
        "lambda_dn": grid,
        "l_a": np.empty_like(grid),
        "l_m": np.empty_like(grid),
        "l_gen": np.empty_like(grid),
        "a_up_over_in": np.empty_like(grid),
        "a_dn_over_in": np.empty_like(grid),
    }
    for i, lam in enumerate(grid):
        p = CavityParams.from_coupling_strength(eta_esc, cooperativity, lam)
        budget = loss_budget(p)
        up = output_amplitudes(p, QubitBranch.UP, 1.0)
        dn = output_amplitudes(p, QubitBranch.DOWN, 1.0)
        rows["l_a"][i] = budget.l_a
        rows["l_m"][i] = budget.l_m
        rows["l_gen"][i] = budget.l_gen
        rows["a_up_over_in"][i] = up.a.real
        rows["a_dn_over_in"][i] = dn.a.real
    return rows

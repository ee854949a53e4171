"""Semiclassical round-trip model of the cavity.

Instead of the input-output closed forms, this module builds the cavity
response from its microscopic ingredients: mirror amplitude
reflectivities, a round-trip time, and a linear susceptibility of the
intracavity medium.  Summing the geometric series of round trips gives
the circulating field and the three output channels.  The model carries
finite-finesse corrections of relative size 1/finesse, so it converges
to the closed forms as the finesse grows; that convergence is the main
cross-check it provides.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .cavity import CavityParams, DetuningSet, QubitBranch, _response_denominator, output_amplitudes
from .errors import NumericalError, ParameterError


@dataclass(frozen=True)
class RoundTripParams:
    """Microscopic cavity description.

    The fields are redundant on purpose: the constructor checks that the
    mirror amplitudes, the loss rates and the medium strength describe
    one consistent cavity, which catches unit mistakes early.
    """

    finesse: float
    optical_depth: float
    rho_in: float
    tau_in: float
    rho_hr: float
    round_trip_time: float
    wavenumber: float
    medium_length: float
    chi0: float
    # Medium response parameters, needed to evaluate the susceptibility
    # away from resonance and on the blockaded branch.
    gamma: float
    omega_c: float
    gamma_rg: float

    def __post_init__(self):
        if self.finesse <= 0.0:
            raise ParameterError(f"finesse must be > 0, got {self.finesse!r}")
        if self.optical_depth < 0.0:
            raise ParameterError(
                f"optical_depth must be >= 0, got {self.optical_depth!r}"
            )
        for name in ("rho_in", "rho_hr"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ParameterError(f"{name} must be in (0, 1], got {value!r}")
        for name in ("round_trip_time", "wavenumber", "medium_length", "gamma",
                     "gamma_rg"):
            value = getattr(self, name)
            if value <= 0.0:
                raise ParameterError(f"{name} must be > 0, got {value!r}")
        if self.omega_c < 0.0:
            raise ParameterError(f"omega_c must be >= 0, got {self.omega_c!r}")
        if self.chi0 < 0.0:
            raise ParameterError(f"chi0 must be >= 0, got {self.chi0!r}")
        if abs(self.rho_in**2 + self.tau_in**2 - 1.0) > 1e-9:
            raise ParameterError("input mirror must satisfy rho^2 + tau^2 = 1")
        depth = self.wavenumber * self.medium_length * self.chi0
        if abs(depth - self.optical_depth) > 1e-9 * max(1.0, self.optical_depth):
            raise ParameterError(
                "optical_depth inconsistent with wavenumber * length * chi0"
            )
        if self.rho_in * self.rho_hr >= 1.0:
            raise ParameterError("lossless mirrors leave the finesse undefined")
        expected = math.pi / (self.kappa * self.round_trip_time)
        if abs(expected - self.finesse) > 1e-9 * self.finesse:
            raise ParameterError(
                "finesse inconsistent with mirror losses and round-trip time"
            )

    @property
    def kappa(self) -> float:
        """Total field decay rate implied by the mirror amplitudes."""
        return -math.log(self.rho_in * self.rho_hr) / self.round_trip_time

    @property
    def kappa_in(self) -> float:
        """Decay rate through the input mirror alone."""
        return -math.log(self.rho_in) / self.round_trip_time

    @property
    def cooperativity(self) -> float:
        return self.optical_depth * self.finesse / (2.0 * math.pi)

    @classmethod
    def from_cavity(
        cls,
        cavity: CavityParams,
        finesse: float,
        wavenumber: float = 2.0 * math.pi,
        medium_length: float = 1.0,
    ) -> "RoundTripParams":
        """Realize the given macroscopic cavity at a chosen finesse."""
        if finesse <= 0.0:
            raise ParameterError(f"finesse must be > 0, got {finesse!r}")
        t_rt = math.pi / (cavity.kappa * finesse)
        rho_in = math.exp(-cavity.kappa_in * t_rt)
        rho_hr = math.exp(-cavity.kappa_hr * t_rt)
        depth = 2.0 * math.pi * cavity.cooperativity / finesse
        return cls(
            finesse=finesse,
            optical_depth=depth,
            rho_in=rho_in,
            tau_in=math.sqrt(1.0 - rho_in**2),
            rho_hr=rho_hr,
            round_trip_time=t_rt,
            wavenumber=wavenumber,
            medium_length=medium_length,
            chi0=depth / (wavenumber * medium_length),
            gamma=cavity.gamma,
            omega_c=cavity.omega_c,
            gamma_rg=cavity.gamma_rg,
        )

    def _medium_params(self) -> CavityParams:
        # Adapter so the shared response denominator can be reused.  The
        # cavity rates are irrelevant for the susceptibility; only the
        # medium fields matter.
        return CavityParams(
            eta_esc=1.0,
            cooperativity=self.cooperativity,
            gamma=self.gamma,
            omega_c=self.omega_c,
            gamma_rg=self.gamma_rg,
        )


def susceptibility(
    rt: RoundTripParams, det: DetuningSet, branch: QubitBranch
) -> complex:
    """Linear susceptibility of the intracavity medium."""
    den = _response_denominator(rt._medium_params(), det, branch)
    return 1j * rt.chi0 * rt.gamma / den


def medium_transmission(
    rt: RoundTripParams, det: DetuningSet, branch: QubitBranch
) -> complex:
    """Amplitude transmission of one pass through the medium."""
    chi = susceptibility(rt, det, branch)
    return cmath.exp(0.5j * rt.wavenumber * rt.medium_length * chi)


@dataclass(frozen=True)
class RoundTripFields:
    """Circulating field and the three output channels."""

    circulating: complex
    r: complex
    a: complex
    m: complex


def intracavity_and_outputs(
    rt: RoundTripParams,
    det: DetuningSet,
    branch: QubitBranch,
    alpha_in: complex,
) -> RoundTripFields:
    """Sum the round-trip series for a monochromatic drive.

    The reflected output interferes the promptly reflected drive with
    the light leaking back out of the cavity; the scattered and mirror
    channels drain the circulating field.  Absolute passivity holds only
    up to corrections of order 1/finesse, which is inherent to lumping
    the distributed losses at discrete points of the round trip.
    """
    tau = medium_transmission(rt, det, branch)
    phase = cmath.exp(1j * det.delta_c * rt.round_trip_time)
    loop = rt.rho_in * rt.rho_hr * tau * phase
    denom = 1.0 - loop
    if abs(denom) < 1e-300:
        raise NumericalError("round-trip series does not converge: loop gain 1")
    circ = rt.tau_in * alpha_in / denom
    r = -rt.rho_in * alpha_in + rt.tau_in * rt.rho_hr * tau * circ
    a = math.sqrt(max(0.0, 1.0 - abs(tau) ** 2)) * circ
    m = math.sqrt(1.0 - rt.rho_hr**2) * circ
    return RoundTripFields(circulating=circ, r=r, a=a, m=m)


@dataclass(frozen=True)
class ConvergenceStudy:
    """Error of the round-trip model against the closed forms."""

    finesse: np.ndarray
    max_error: np.ndarray
    slope: float


def convergence_study(cavity: CavityParams, finesse_grid) -> ConvergenceStudy:
    """Measure how fast the round-trip outputs approach the closed forms.

    On resonance and for both qubit branches, compares (r, a, m) per
    unit drive against the closed-form amplitudes and records the worst
    error at each finesse.  The slope of log(error) vs log(finesse)
    should be close to -1.
    """
    grid = np.asarray(finesse_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ParameterError("finesse_grid must have at least two values")
    det = DetuningSet.resonant()
    errors = np.empty_like(grid)
    for i, finesse in enumerate(grid):
        rt = RoundTripParams.from_cavity(cavity, finesse)
        worst = 0.0
        for branch in QubitBranch:
            exact = output_amplitudes(cavity, branch, 1.0)
            fields = intracavity_and_outputs(rt, det, branch, 1.0)
            worst = max(
                worst,
                abs(fields.r - exact.r),
                abs(fields.a - exact.a),
                abs(fields.m - exact.m),
            )
        errors[i] = worst
    slope = float(np.polyfit(np.log(grid), np.log(errors), 1)[0])
    return ConvergenceStudy(finesse=grid, max_error=errors, slope=slope)

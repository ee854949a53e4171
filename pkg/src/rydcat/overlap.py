"""Radiated-mode overlaps of dipoles in a cold-atom cloud.

A photon scattered collectively by the cloud leaves in a superposition
of dipole-radiation patterns anchored at the atom positions.  The
overlap of two such patterns depends on the pair separation through
spherical Bessel kernels and on the incident polarization through a
Legendre factor; a plane-wave phase from the drive multiplies it.  From
the pairwise overlap matrix this module reduces the full-cloud overlap
between the two qubit branches, whose shortfall from unity is the
mode-mismatch decoherence fed into the cat loss budget.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bessel import j0_stable, j2_stable
from .errors import NumericalError, ParameterError


def legendre_p2(x):
    """Second Legendre polynomial."""
    x = np.asarray(x, dtype=float)
    out = 1.5 * x * x - 0.5
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class Polarization:
    """Unit Jones vector of the incident field."""

    jones: np.ndarray

    def __post_init__(self):
        jones = np.asarray(self.jones, dtype=complex)
        if jones.shape != (3,):
            raise ParameterError(f"jones must have shape (3,), got {jones.shape}")
        norm_sq = float(np.vdot(jones, jones).real)
        if abs(norm_sq - 1.0) > 1e-12:
            raise ParameterError(
                f"jones vector must be normalized, |e|^2 = {norm_sq!r}"
            )
        object.__setattr__(self, "jones", jones)

    @property
    def self_overlap(self) -> float:
        """Magnitude of the unconjugated self product e . e.

        1 for linear polarization, 0 for circular; controls the
        mean-square pair overlap of a thermal cloud.
        """
        return float(abs(np.sum(self.jones * self.jones)))

    @classmethod
    def circular(cls) -> "Polarization":
        return cls(np.array([1.0, 1.0j, 0.0]) / np.sqrt(2.0))

    @classmethod
    def linear(cls, axis=(1.0, 0.0, 0.0)) -> "Polarization":
        axis = np.asarray(axis, dtype=float)
        norm = np.linalg.norm(axis)
        if norm == 0.0:
            raise ParameterError("linear polarization axis cannot be zero")
        return cls((axis / norm).astype(complex))


@dataclass(frozen=True, eq=False)
class AtomCloud:
    """Fixed atom positions and the incident wavevector.

    ``sigmas`` and ``seed`` are optional provenance of a Gaussian draw;
    they do not affect any computation.
    """

    positions: np.ndarray
    k_in: np.ndarray
    sigmas: tuple[float, float, float] | None = None
    seed: int | None = None

    def __post_init__(self):
        positions = np.asarray(self.positions, dtype=float)
        k_in = np.asarray(self.k_in, dtype=float)
        if positions.ndim != 2 or positions.shape[1] != 3:
            raise ParameterError(
                f"positions must have shape (N, 3), got {positions.shape}"
            )
        if positions.shape[0] < 2:
            raise ParameterError("need at least two atoms")
        if k_in.shape != (3,):
            raise ParameterError(f"k_in must have shape (3,), got {k_in.shape}")
        if np.linalg.norm(k_in) == 0.0:
            raise ParameterError("k_in cannot be the zero vector")
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "k_in", k_in)

    @property
    def n_atoms(self) -> int:
        return self.positions.shape[0]

    @property
    def wavenumber(self) -> float:
        return float(np.linalg.norm(self.k_in))

    @classmethod
    def sample(
        cls,
        n_atoms: int,
        sigmas,
        wavelength: float,
        rng: np.random.Generator,
        direction=(0.0, 0.0, -1.0),
    ) -> "AtomCloud":
        """Draw a Gaussian cloud illuminated along ``direction``."""
        if wavelength <= 0.0:
            raise ParameterError(f"wavelength must be > 0, got {wavelength!r}")
        sig = np.asarray(sigmas, dtype=float)
        if sig.shape != (3,) or np.any(sig <= 0.0):
            raise ParameterError("sigmas must be three positive lengths")
        direction = np.asarray(direction, dtype=float)
        norm = np.linalg.norm(direction)
        if norm == 0.0:
            raise ParameterError("direction cannot be the zero vector")
        k = 2.0 * np.pi / wavelength
        positions = rng.normal(0.0, sig, size=(n_atoms, 3))
        return cls(
            positions=positions,
            k_in=k * direction / norm,
            sigmas=tuple(float(s) for s in sig),
        )


def pair_overlap_projected(kx, projection):
    """Real overlap kernel at scaled separation ``kx``.

    ``projection`` is the magnitude of the dot product between the unit
    separation vector and the Jones vector.  Vectorized in ``kx``.
    """
    return j0_stable(kx) + legendre_p2(projection) * j2_stable(kx)


def pair_overlap(x_i, x_j, k_in, polarization: Polarization) -> complex:
    """Overlap of the radiation patterns of two driven dipoles.

    Includes the drive phase factor between the two sites.  Coincident
    atoms overlap perfectly.
    """
    x_i = np.asarray(x_i, dtype=float)
    x_j = np.asarray(x_j, dtype=float)
    k_in = np.asarray(k_in, dtype=float)
    sep = x_i - x_j
    dist = float(np.linalg.norm(sep))
    if dist == 0.0:
        return 1.0 + 0.0j
    proj = abs(np.sum(sep * polarization.jones)) / dist
    kernel = pair_overlap_projected(float(np.linalg.norm(k_in)) * dist, proj)
    beta = float(np.dot(k_in, sep))
    return complex(np.exp(-1j * beta) * kernel)


@dataclass(frozen=True, eq=False)
class OverlapMatrix:
    """Hermitian pairwise overlap matrix with unit diagonal."""

    s: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s, dtype=complex)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ParameterError(f"s must be square, got shape {s.shape}")
        object.__setattr__(self, "s", s)

    @property
    def n_atoms(self) -> int:
        return self.s.shape[0]

    def validate(self, atol: float = 1e-12) -> None:
        """Check hermiticity and the unit diagonal."""
        if np.max(np.abs(self.s - self.s.conj().T)) > atol:
            raise ParameterError("overlap matrix is not Hermitian")
        if np.max(np.abs(np.diagonal(self.s) - 1.0)) > atol:
            raise ParameterError("overlap matrix diagonal is not 1")


def overlap_matrix(cloud: AtomCloud, polarization: Polarization) -> OverlapMatrix:
    """All pairwise overlaps of the cloud, at fixed positions."""
    pos = cloud.positions
    diffs = pos[:, None, :] - pos[None, :, :]
    dist = np.linalg.norm(diffs, axis=-1)
    safe = np.where(dist == 0.0, 1.0, dist)
    # Magnitude of the separation direction projected on the Jones
    # vector.  Coincident pairs get an arbitrary value; the order-2
    # kernel vanishes there, so it never enters.
    proj = np.abs(np.tensordot(diffs, polarization.jones, axes=(-1, 0))) / safe
    kernel = j0_stable(cloud.wavenumber * dist) + legendre_p2(proj) * j2_stable(
        cloud.wavenumber * dist
    )
    beta = np.tensordot(diffs, cloud.k_in, axes=(-1, 0))
    s = np.exp(-1j * beta) * kernel
    np.fill_diagonal(s, 1.0)
    return OverlapMatrix(s=s)


@dataclass(frozen=True, eq=False)
class CollectiveOverlap:
    """Branch overlap of the collective radiated modes.

    ``c_up_dn`` is the complex overlap, ``b_up_dn`` the mode mismatch
    fed to the loss budget, ``per_atom`` the normalizations of the
    blockade-punctured modes.
    """

    c_up_dn: complex
    b_up_dn: float
    per_atom: np.ndarray | None = None

    def __post_init__(self):
        if abs(self.c_up_dn) > 1.0 + 1e-9:
            raise ParameterError(
                f"collective overlap magnitude cannot exceed 1, got {self.c_up_dn!r}"
            )


def collective_from_matrix(matrix: OverlapMatrix) -> CollectiveOverlap:
    """Reduce the pairwise matrix to the branch overlap.

    The transparent branch radiates the fully symmetric collective
    mode.  In the blockaded branch the excited atom drops out, and the
    blockade mixes the punctured modes with equal weight; the reduction
    below sums them without ever forming the N x N x N intermediate.
    """
    s = matrix.s
    n = s.shape[0]
    if n < 2:
        raise ParameterError("need at least two atoms")
    row = s.sum(axis=1)
    n_dn = float(s.sum().real)
    if n_dn <= 0.0:
        raise NumericalError("nonpositive normalization of the symmetric mode")
    per_atom = n_dn - 2.0 * row.real + 1.0
    if np.any(per_atom <= 0.0):
        raise NumericalError("nonpositive normalization of a punctured mode")
    inv = 1.0 / np.sqrt(per_atom)
    t0 = float(inv.sum())
    t1 = complex((inv * row).sum())
    t2 = float((inv @ s @ inv).real)
    n_up = n_dn * t0**2 - 2.0 * t0 * t1.real + t2
    if n_up <= 0.0:
        raise NumericalError("nonpositive normalization of the blockaded mode")
    c = (n_dn * t0 - t1) / np.sqrt(n_dn * n_up)
    c = complex(c)
    return CollectiveOverlap(
        c_up_dn=c, b_up_dn=1.0 - c.real, per_atom=per_atom
    )


def collective_overlap(
    cloud: AtomCloud, polarization: Polarization
) -> CollectiveOverlap:
    """Branch overlap of a cloud, straight from the positions."""
    return collective_from_matrix(overlap_matrix(cloud, polarization))


def pair_statistics(matrix: OverlapMatrix) -> tuple[complex, float]:
    """Mean pair overlap and mean squared magnitude over distinct pairs."""
    n = matrix.n_atoms
    if n < 2:
        raise ParameterError("need at least two atoms")
    iu, ju = np.triu_indices(n, k=1)
    vals = matrix.s[iu, ju]
    return complex(vals.mean()), float(np.mean(np.abs(vals) ** 2))

"""Spherical Bessel functions needed by the dipole radiation kernel.

Only orders 0 and 2 appear.  The closed trigonometric forms cancel
catastrophically near the origin (the order-2 one loses all digits
below |x| ~ 1e-4), so both switch to truncated Taylor series under a
fixed cutoff.  The series lengths are chosen so the switchover error
stays below 1e-10 in relative terms on either side of the cutoff.
"""

from __future__ import annotations

import numpy as np

_TAYLOR_CUTOFF = 0.5


def j0_stable(x):
    """Spherical Bessel function of order 0, stable at small arguments.

    Accepts scalars or arrays; returns the same shape.
    """
    arr = np.abs(np.asarray(x, dtype=float))
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    small = arr < _TAYLOR_CUTOFF
    safe = np.where(small, 1.0, arr)
    x2 = arr * arr
    series = 1.0 + x2 * (
        -1.0 / 6.0
        + x2 * (1.0 / 120.0 + x2 * (-1.0 / 5040.0 + x2 * (1.0 / 362880.0)))
    )
    closed = np.sin(safe) / safe
    out = np.where(small, series, closed)
    return float(out[0]) if scalar else out


def j2_stable(x):
    """Spherical Bessel function of order 2, stable at small arguments.

    Accepts scalars or arrays; returns the same shape.
    """
    arr = np.abs(np.asarray(x, dtype=float))
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    small = arr < _TAYLOR_CUTOFF
    safe = np.where(small, 1.0, arr)
    x2 = arr * arr
    series = x2 * (
        1.0 / 15.0
        + x2
        * (
            -1.0 / 210.0
            + x2
            * (
                1.0 / 7560.0
                + x2 * (-1.0 / 498960.0 + x2 * (1.0 / 51891840.0))
            )
        )
    )
    s = np.sin(safe)
    c = np.cos(safe)
    closed = (3.0 / safe**3 - 1.0 / safe) * s - (3.0 / safe**2) * c
    out = np.where(small, series, closed)
    return float(out[0]) if scalar else out

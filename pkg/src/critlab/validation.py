"""Input checks shared by the estimators and the experiment runner.

``sklearn.utils.check_array`` rejects complex input, so root matrices are
checked here instead.
"""
from __future__ import annotations

import numbers

import numpy as np

#: roots must lie on the unit circle to within this
CIRCLE_TOL = 1e-9


def check_roots(x, *, on_circle: bool = True, min_size: int = 2) -> np.ndarray:
    """Return ``x`` as a 1-d complex array of finite roots."""
    z = np.asarray(x, dtype=complex)
    if z.ndim != 1:
        raise ValueError(f"expected a 1-d array of roots, got shape {z.shape}")
    if z.size < min_size:
        raise ValueError(f"need at least {min_size} roots, got {z.size}")
    if not np.all(np.isfinite(z)):
        raise ValueError("roots contain NaN or infinity")
    if on_circle:
        off = np.abs(np.abs(z) - 1.0).max()
        if off > CIRCLE_TOL:
            raise ValueError(f"roots must lie on the unit circle (max | |z| - 1 | = {off:.3g})")
    return z


def check_root_matrix(X, *, on_circle: bool = True) -> np.ndarray:
    """Return ``X`` as a 2-d complex array, one root vector per row."""
    z = np.asarray(X, dtype=complex)
    if z.ndim == 1:
        raise ValueError("expected a 2-d array; reshape a single root vector with X.reshape(1, -1)")
    if z.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {z.shape}")
    if z.shape[0] == 0:
        raise ValueError("X has no rows")
    for row in z:
        check_roots(row, on_circle=on_circle)
    return z


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_unit_radius(value, name: str = "r") -> float:
    r = float(value)
    if not 0.0 < r < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {value}")
    return r

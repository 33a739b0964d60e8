"""The limit of the scaled logarithmic derivative inside the disc.

For roots drawn from ``mu``, ``p_n'(z)/(n p_n(z))`` converges on compact
subsets of the open unit disc to ``-f(z)`` where

    f(z) = sum_{k >= 0} conj(c_{k+1}) z^k,    c_k = E[Z^k].

By Hurwitz's theorem the number of critical points inside ``|z| < r``
eventually equals the number of zeros of ``f`` there, which
:func:`count_zeros_in_disc` computes with the argument principle.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .circle_measure import CircleMeasure, moments
from .exceptions import ContourError

CONTOUR_POINTS = 4096
MAX_CONTOUR_POINTS = 1 << 22


class ZeroCount(enum.Enum):
    IDENTICALLY_ZERO = "identically-zero"


#: returned by :func:`count_zeros_in_disc` when ``f`` vanishes identically
IDENTICALLY_ZERO = ZeroCount.IDENTICALLY_ZERO


def truncation_for(r: float, tol: float) -> int:
    """Smallest ``K`` with ``r**K / (1 - r) <= tol``."""
    if not 0 <= r < 1:
        raise ValueError(f"radius must lie in [0, 1), got {r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if r == 0:
        return 1
    return max(1, math.ceil(math.log(tol * (1 - r)) / math.log(r)))


@dataclass(frozen=True, eq=False)
class LimitFunction:
    """Truncated power series of ``f`` valid on ``|z| <= radius``.

    ``tail_bound`` bounds the truncation error there, using ``|c_k| <= 1``.
    """

    moments: np.ndarray
    truncation: int
    tail_bound: float
    radius: float
    identically_zero: bool = False

    @classmethod
    def from_measure(cls, m: CircleMeasure, radius: float, tol: float) -> "LimitFunction":
        k = truncation_for(radius, tol)
        c = moments(m, k)
        return cls(moments=c, truncation=k, tail_bound=radius ** k / (1 - radius),
                   radius=radius, identically_zero=m.is_uniform)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > self.radius * (1 + 1e-12)):
            raise ValueError(f"series truncated for |z| <= {self.radius}")
        # coefficient of z^k is conj(c_{k+1}); polyval wants highest degree first
        return np.polyval(np.conj(self.moments)[::-1], z)


def eval_f(m: CircleMeasure, z: complex, tol: float = 1e-12) -> complex:
    """``f(z)`` to within ``tol`` for ``|z| < 1``."""
    r = abs(z)
    if r >= 1:
        raise ValueError(f"f is only defined in the open unit disc, |z| = {r}")
    return complex(LimitFunction.from_measure(m, r, tol)(z))


def _winding(values: np.ndarray) -> tuple[float, float]:
    steps = np.angle(np.roll(values, -1) / values)
    return float(steps.sum() / (2 * np.pi)), float(np.abs(steps).max())


def count_zeros_in_disc(m: CircleMeasure, r: float, tol: float = 1e-10):
    """Number of zeros of ``f`` in ``|z| < r``, by phase tracking on ``|z| = r``.

    Returns :data:`IDENTICALLY_ZERO` for the uniform measure, where every
    moment vanishes and counting is meaningless.

    Raises
    ------
    ContourError
        If ``|f|`` drops to ``10 * tol`` or below somewhere on the contour,
        or the winding number cannot be resolved.
    """
    if not 0 < r < 1:
        raise ValueError(f"radius must lie in (0, 1), got {r}")
    if m.is_uniform:
        return IDENTICALLY_ZERO
    f = LimitFunction.from_measure(m, r, tol)
    n = CONTOUR_POINTS
    vals = f(r * np.exp(2j * np.pi * np.arange(n) / n))
    if np.abs(vals).min() <= 10 * tol:
        raise ContourError(f"contour degenerate at r={r}: |f| <= {10 * tol:g}; choose a different r")
    previous = None
    while n <= MAX_CONTOUR_POINTS:
        turns, biggest = _winding(vals)
        count = round(turns)
        resolved = abs(turns - count) * 2 * np.pi <= 0.1 and biggest < np.pi / 4
        if resolved and count == previous:
            return int(count)
        previous = count if resolved else None
        n *= 2
        vals = f(r * np.exp(2j * np.pi * np.arange(n) / n))
    raise ContourError(f"winding number at r={r} did not stabilize; choose a different r")

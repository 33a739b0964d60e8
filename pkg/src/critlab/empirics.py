"""Empirical statistics of root and critical point sets.

Angles are in turns (``[0, 1)``).  ``circular_w1`` is the headline
distance between angular distributions: the Wasserstein-1 distance on the
circle of circumference 1, which metrizes weak convergence there.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circle_measure import CircleMeasure, angle_cdf, angle_cdf_left, points_to_turns


@dataclass(frozen=True, eq=False)
class PolarSet:
    """Points as ``radii * exp(2*pi*i*angles)``.

    ``at_origin`` flags points equal to 0, whose angle is set to 0 by
    convention.
    """

    radii: np.ndarray
    angles: np.ndarray
    at_origin: np.ndarray

    @property
    def size(self) -> int:
        return len(self.radii)

    def points(self) -> np.ndarray:
        return self.radii * np.exp(2j * np.pi * self.angles)


def to_polar(points) -> PolarSet:
    z = np.asarray(points, dtype=complex).reshape(-1)
    origin = z == 0
    angles = np.where(origin, 0.0, points_to_turns(z))
    return PolarSet(radii=np.abs(z), angles=angles, at_origin=origin)


def _nonempty(x, what):
    if len(x) == 0:
        raise ValueError(f"{what}: empty input")


def empirical_moment(points, k: int) -> complex:
    """``mean(points ** k)``."""
    z = np.asarray(points, dtype=complex).reshape(-1)
    _nonempty(z, "empirical_moment")
    return complex(np.mean(z ** int(k)))


def radial_moment(ps: PolarSet, k: int) -> float:
    """``mean(radii ** k)``."""
    _nonempty(ps.radii, "radial_moment")
    return float(np.mean(ps.radii ** int(k)))


def squeeze_lower_bound(ps: PolarSet, k: int, eps: float) -> float:
    """``(1 - eps)**k`` times the fraction of radii in ``[1 - eps, 1]``.

    For points in the closed unit disc this never exceeds
    ``radial_moment(ps, k)``.
    """
    frac = np.mean((ps.radii >= 1 - eps) & (ps.radii <= 1))
    return float((1 - eps) ** int(k) * frac)


def weyl_sum(ps: PolarSet, k: int) -> complex:
    """``mean(exp(2*pi*i*k*angles))``."""
    _nonempty(ps.angles, "weyl_sum")
    return complex(np.mean(np.exp(2j * np.pi * int(k) * ps.angles)))


def interior_count(points, r: float) -> int:
    """How many points satisfy ``|y| < r``."""
    return int(np.count_nonzero(np.abs(np.asarray(points, dtype=complex)) < r))


def circular_w1(a, b) -> float:
    """Wasserstein-1 distance between two empirical angle distributions.

    On a circle of circumference 1 this is
    ``min_c integral_0^1 |F_a(t) - F_b(t) - c| dt``; the difference of the
    two step CDFs is piecewise constant, so the integral is an exact sum and
    the optimal ``c`` is a length-weighted median of its values.
    """
    a = np.sort(np.asarray(a, dtype=float).reshape(-1))
    b = np.sort(np.asarray(b, dtype=float).reshape(-1))
    _nonempty(a, "circular_w1")
    _nonempty(b, "circular_w1")
    knots = np.unique(np.concatenate([[0.0, 1.0], a, b]))
    left = knots[:-1]
    length = np.diff(knots)
    g = (np.searchsorted(a, left, side="right") / a.size
         - np.searchsorted(b, left, side="right") / b.size)
    order = np.argsort(g, kind="stable")
    cum = np.cumsum(length[order])
    c = g[order][np.searchsorted(cum, 0.5 * cum[-1])]
    return float(np.sum(length * np.abs(g - c)))


def _atoms(m: CircleMeasure):
    if m.kind == "atomic":
        return list(m.atoms)
    if m.kind == "mixture":
        return [a for c in m.components for a in _atoms(c)]
    if m.kind == "arc":
        return list(m.arc_bounds)
    return []


def ks_distance(angles, m: CircleMeasure) -> float:
    """``sup_t |F_emp(t) - nu([0, t])|`` over ``t`` in ``[0, 1]``.

    Both CDFs are monotone and the empirical one is a step function, so the
    supremum is attained at a sample point or an atom, on one side or the
    other; both one-sided limits are checked there.
    """
    x = np.sort(np.asarray(angles, dtype=float).reshape(-1))
    _nonempty(x, "ks_distance")
    t = np.unique(np.clip(np.concatenate([x, _atoms(m), [0.0, 1.0]]), 0.0, 1.0))
    right = np.abs(np.searchsorted(x, t, side="right") / x.size - angle_cdf(m, t))
    left = np.abs(np.searchsorted(x, t, side="left") / x.size - angle_cdf_left(m, t))
    return float(max(right.max(), left.max()))

"""Critical points of root-stored polynomials.

Repeated roots are deflated exactly: a root of multiplicity ``m`` is a zero
of ``p'`` of multiplicity ``m - 1``.  The remaining ``d - 1`` critical
points are the zeros of ``S(z) = sum m_j/(z - zeta_j)`` and are found by a
simultaneous Aberth-Ehrlich iteration on ``p'``; the Newton step for ``p'``
is ``p'/p'' = S/(S**2 + S')``, so no coefficients are ever formed.

:func:`critical_points_dense` is the independent check: eigenvalues of the
materialized companion matrix.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import companion
from ._clusters import normalized_residual, polish_clusters
from ._kernels import (TAYLOR_TERMS, aberth_sweep, aberth_sweep_blocked, block_centers,
                       build_blocks, residuals, residuals_blocked)
from .circle_measure import derive_seed, make_generator, points_to_turns
from .exceptions import DegenerateError, OracleScopeError
from .root_poly import RootPoly, log_derivative, log_derivative_prime

HUNGARIAN_LIMIT = 64
BLOCKED_MIN_DISTINCT = 2048


@dataclass(frozen=True)
class SolverOptions:
    tolerance: float = 1e-12
    max_iterations: int = 200
    restarts: int = 3

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.restarts < 0:
            raise ValueError("restarts must be >= 0")


@dataclass(frozen=True, eq=False)
class CriticalSet:
    """The ``n - 1`` critical points (multiplicity expanded) and diagnostics.

    ``max_residual`` is the largest normalized residual over the iterated
    (non-deflated) points: ``|S(y)|`` divided by
    ``d / dist(y, roots) + 16 * eps * |y| * |S'(y)| / tolerance``, so that
    ``converged`` means ``max_residual <= tolerance``.
    """

    points: np.ndarray
    method: str
    iterations: int = 0
    max_residual: float = 0.0
    converged: bool = True

    def __len__(self) -> int:
        return len(self.points)


def _deflated(p: RootPoly) -> np.ndarray:
    return np.repeat(p.distinct_roots, p.multiplicities - 1)


def initial_iterates(roots: np.ndarray) -> np.ndarray:
    """Starting points: gap midpoints of the angle-sorted roots, pulled inwards."""
    d = len(roots)
    angles = np.sort(points_to_turns(roots))
    mid = 0.5 * (angles[:-1] + angles[1:])
    return (1.0 - 1.0 / (2 * d)) * np.exp(2j * np.pi * mid)


def _block_layout(d: int):
    nblocks = max(16, int(0.6 * np.sqrt(d)))
    radius = 1.25 * 2.0 * np.sin(np.pi / (2 * nblocks))
    return block_centers(nblocks), radius


def critical_points(p: RootPoly, opts: SolverOptions | None = None) -> CriticalSet:
    """Critical points of ``p`` by exact deflation plus Aberth iteration.

    From ``BLOCKED_MIN_DISTINCT`` simple roots upward, sums over far roots
    and far iterates go through blocked Taylor expansions; below that, or
    with repeated roots, every sum is direct.  Never silently wrong: if
    some iterates fail to converge after every restart, the result
    carries ``converged=False``.
    """
    opts = opts or SolverOptions()
    if p.degree < 2:
        raise ValueError("degree must be at least 2")
    fixed = _deflated(p)
    d = p.n_distinct
    if d == 1:
        return CriticalSet(points=fixed, method="iterative")
    if d == 2:
        # m1/(z - a) + m2/(z - b) = 0 has the single solution below
        (a, b), (m1, m2) = p.distinct_roots, p.multiplicities
        y = (m1 * b + m2 * a) / (m1 + m2)
        return CriticalSet(points=np.append(fixed, y), method="iterative")

    roots = p.distinct_roots
    rr = np.ascontiguousarray(roots.real)
    ri = np.ascontiguousarray(roots.imag)
    mult = p.multiplicities.astype(float)
    weighted = bool(np.any(p.multiplicities > 1))
    y = initial_iterates(roots)
    yr = np.ascontiguousarray(y.real)
    yi = np.ascontiguousarray(y.imag)
    active = np.ones(d - 1, dtype=np.bool_)
    resid = np.full(d - 1, np.inf)
    step = np.full(d - 1, np.inf)
    tol = opts.tolerance

    blocked = not weighted and d >= BLOCKED_MIN_DISTINCT
    if blocked:
        centers, radius = _block_layout(d)
        rcoef, rptr, ridx = build_blocks(rr, ri, centers, radius, TAYLOR_TERMS)
        # below this many active iterates, rebuilding expansions costs more
        # than summing directly
        direct_below = len(centers) * TAYLOR_TERMS // 4

    def sweep():
        if blocked and active.sum() >= direct_below:
            return aberth_sweep_blocked(rr, ri, rcoef, rptr, ridx, centers, radius,
                                        TAYLOR_TERMS, yr, yi, active, tol, resid, step)
        return aberth_sweep(rr, ri, mult, weighted, yr, yi, active, tol, resid, step)

    iterations = 0
    settled = False
    for attempt in range(opts.restarts + 1):
        for _ in range(opts.max_iterations):
            iterations += 1
            settled = sweep() == 0
            if settled:
                break
        bad = active | ~np.isfinite(yr) | ~np.isfinite(yi)
        if not bad.any() or attempt == opts.restarts:
            break
        rng = make_generator(derive_seed(d, attempt))
        k = int(bad.sum())
        radius_draw = rng.uniform(0.5, 1.0 - 1.0 / (2 * d), k)
        z = radius_draw * np.exp(2j * np.pi * rng.random(k))
        yr[bad] = z.real
        yi[bad] = z.imag
        active[bad] = True
        settled = False

    # when every iterate froze in the last sweep, resid and step are current
    if not settled:
        if blocked:
            residuals_blocked(rr, ri, rcoef, rptr, ridx, centers, radius, yr, yi, resid, tol, step)
        else:
            residuals(rr, ri, mult, weighted, yr, yi, resid, tol, step)
    y = yr + 1j * yi
    polished, nclusters = polish_clusters(p, y, step, tol, fixed)
    if nclusters:
        moved = polished != y
        resid[moved] = normalized_residual(p, polished[moved], tol)
        y = polished
    max_res = float(resid.max())
    converged = bool(max_res <= tol and np.all(np.isfinite(resid)))
    pts = np.concatenate([fixed, y])
    return CriticalSet(points=pts, method="iterative", iterations=iterations,
                       max_residual=max_res, converged=converged)


def critical_points_dense(p: RootPoly) -> CriticalSet:
    """Critical points as eigenvalues of the dense companion matrix (degree <= 512).

    Eigenvalue clusters around a multiple zero of ``p'`` are replaced by
    their centroids, as in :func:`critical_points`.
    """
    if p.degree > companion.DENSE_ORDER_LIMIT:
        raise OracleScopeError(
            f"dense oracle capped at {companion.DENSE_ORDER_LIMIT}, degree {p.degree} requested")
    eig = companion.dense_eigenvalues(companion.build(p.roots()))
    return CriticalSet(points=eig, method="dense")


def newton_correction(p: RootPoly, z: complex) -> complex:
    """Newton step ``p'(z)/p''(z)`` for ``p'``, computed as ``S/(S**2 + S')``."""
    s = log_derivative(p, z)
    den = s * s + log_derivative_prime(p, z)
    if den == 0:
        raise DegenerateError(f"p'' vanishes at {z!r}; perturb the point")
    return s / den


def matching_distance(a, b) -> float:
    """Largest pairwise distance under a minimal-cost matching of two multisets.

    Exact (Hungarian) up to 64 points; above that, both sets are sorted by
    angle then radius and paired in order, trying a few cyclic offsets.
    """
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if a.size != b.size:
        raise ValueError(f"multisets differ in size: {a.size} vs {b.size}")
    if a.size == 0:
        return 0.0
    if a.size <= HUNGARIAN_LIMIT:
        cost = np.abs(a[:, None] - b[None, :])
        rows, cols = linear_sum_assignment(cost)
        return float(cost[rows, cols].max())
    sa = a[np.lexsort((np.abs(a), points_to_turns(a)))]
    sb = b[np.lexsort((np.abs(b), points_to_turns(b)))]
    return float(min(np.abs(sa - np.roll(sb, s)).max() for s in range(-2, 3)))

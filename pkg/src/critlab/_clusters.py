"""Centroid polishing of clustered approximations to a multiple zero of p'.

Near an m-fold zero of ``p'`` every pointwise method, iterative or dense,
can only place the m approximations on a ring of radius about
``eps**(1/m)``; their mean is nevertheless accurate to rounding level.
Each approximation ``y_j`` gets the Newton inclusion disc of radius
``(n - 1) * |p'(y_j)/p''(y_j)|``, which contains a zero of ``p'``.
Approximations whose discs overlap form a group.

The iterates of a group stop as soon as each passes the residual test, so
their plain mean is only as good as the ring radius.  Instead the cluster
centres ``c_i`` (multiplicities ``m_i``) are recovered from exact power
sums: ``Tr(M^k)`` gives ``sum_j y_j**k`` over all critical points, and
subtracting the resolved points leaves ``sum_i m_i c_i**k`` for
``k = 1..#clusters``, solved by Newton's method from the member means.
A centre is accepted only if it passes the convergence test itself.
Well separated simple zeros have tiny discs and are never grouped.
"""
from __future__ import annotations

import numpy as np
from scipy.cluster.hierarchy import DisjointSet
from scipy.spatial import cKDTree

from ._kernels import EPS, KAPPA
from .root_poly import RootPoly

#: beyond this many clusters the power-sum system is not attempted
MAX_TRACE_CLUSTERS = 8


def normalized_residual(p: RootPoly, z: np.ndarray, tol: float) -> np.ndarray:
    """The solver's convergence measure evaluated with numpy (small inputs)."""
    w = z[:, None] - p.distinct_roots[None, :]
    m = p.multiplicities.astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (m / w).sum(axis=1)
        sp = -(m / w ** 2).sum(axis=1)
        dist = np.abs(w).min(axis=1)
        scale = p.n_distinct / dist + KAPPA * EPS * np.abs(z) * np.abs(sp) / tol
        out = np.abs(s) / scale
    return np.where(dist == 0, np.inf, out)


def newton_sizes(p: RootPoly, z: np.ndarray) -> np.ndarray:
    """``|S/(S**2 + S')|`` at each point; inf at roots and where ``p''`` vanishes."""
    w = z[:, None] - p.distinct_roots[None, :]
    m = p.multiplicities.astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (m / w).sum(axis=1)
        den = s * s - (m / w ** 2).sum(axis=1)
        out = np.abs(s / den)
    return np.where(np.isfinite(out), out, np.inf)


def _trace_centres(p: RootPoly, fixed, y, clusters, start):
    """Cluster centres from exact power sums, or None if Newton fails."""
    from .companion import _trace_table, build

    k = len(clusters)
    mult = np.array([len(c) for c in clusters], dtype=float)
    inside = np.zeros(y.size, dtype=bool)
    for c in clusters:
        inside[c] = True
    others = np.concatenate([fixed, y[~inside]])
    powers = np.arange(1, k + 1)
    rhs = _trace_table(build(p.roots()), k) - (others[None, :] ** powers[:, None]).sum(axis=1)
    c = start.astype(complex)
    for _ in range(50):
        f = (mult * c[None, :] ** powers[:, None]).sum(axis=1) - rhs
        jac = powers[:, None] * mult[None, :] * c[None, :] ** (powers[:, None] - 1)
        try:
            delta = np.linalg.solve(jac, f)
        except np.linalg.LinAlgError:
            return None
        c = c - delta
        if not np.all(np.isfinite(c)):
            return None
        if np.abs(delta).max() <= 4 * EPS * max(1.0, np.abs(c).max()):
            break
    return c


def polish_clusters(p: RootPoly, y: np.ndarray, step: np.ndarray, tol: float,
                    fixed=None) -> tuple[np.ndarray, int]:
    """Replace certified clusters of ``y`` by their centres.

    ``step`` holds ``|p'/p''|`` at each ``y``; ``fixed`` lists the critical
    points not in ``y`` (deflated roots).  Returns the polished copy and
    the number of clusters replaced.
    """
    fixed = np.zeros(0, dtype=complex) if fixed is None else np.asarray(fixed, dtype=complex)
    y = np.asarray(y, dtype=complex)
    rho = (p.degree - 1) * np.asarray(step, dtype=float)
    ok = np.isfinite(rho) & np.isfinite(y)
    idx = np.flatnonzero(ok)
    if idx.size < 2:
        return y, 0
    pts = np.column_stack([y[idx].real, y[idx].imag])
    tree = cKDTree(pts)
    nearest = tree.query(pts, k=2)[0][:, 1]
    # an overlapping pair lies within twice the larger radius, so only
    # points whose doubled radius reaches their nearest neighbour need a query
    seeds = np.flatnonzero(2.0 * rho[idx] >= nearest)
    if seeds.size == 0:
        return y, 0
    groups = DisjointSet(range(idx.size))
    for a in seeds:
        for b in tree.query_ball_point(pts[a], 2.0 * rho[idx[a]]):
            if b != a and abs(y[idx[a]] - y[idx[b]]) <= rho[idx[a]] + rho[idx[b]]:
                groups.merge(a, b)
    clusters = [idx[sorted(s)] for s in groups.subsets() if len(s) > 1]
    if not clusters:
        return y, 0
    means = np.array([y[c].mean() for c in clusters])
    centres = None
    if len(clusters) <= MAX_TRACE_CLUSTERS:
        centres = _trace_centres(p, fixed, y, clusters, means)
    out = y.copy()
    replaced = 0
    for i, sel in enumerate(clusters):
        for c in ([centres[i]] if centres is not None else []) + [means[i]]:
            if normalized_residual(p, np.array([c]), tol)[0] <= tol:
                out[sel] = c
                replaced += 1
                break
    return out, replaced

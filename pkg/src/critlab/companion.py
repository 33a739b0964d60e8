"""Companion matrix of the critical points in diagonal-plus-rank-one form.

For roots ``z_1 .. z_n`` the ``(n-1) x (n-1)`` matrix

    M = D (I - J/n) + (z_n/n) J,    D = diag(z_1, .., z_{n-1}),  J = ones

has the critical points of ``prod (z - z_i)`` as its eigenvalues.  Entry
``(i, j)`` is ``z_i * delta_ij + (z_n - z_i)/n``, so ``M = diag(d) + u 1^T``
with ``d_i = z_i`` and ``u_i = (z_n - z_i)/n``.  That structure gives an
O(n) matrix-vector product and power-sum traces ``Tr(M^k)`` in O(n k^2)
without ever forming ``M``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import OracleScopeError

DENSE_ORDER_LIMIT = 512


@dataclass(frozen=True, eq=False)
class StructuredCompanion:
    """``M = diag(diag) + outer(update, ones)``."""

    diag: np.ndarray
    update: np.ndarray
    n: int
    tail: complex | None = None

    @property
    def order(self) -> int:
        return self.n - 1

    def points(self) -> np.ndarray:
        """The ``n`` underlying points ``z_1 .. z_n``."""
        tail = self.tail if self.tail is not None else self.diag[0] + self.n * self.update[0]
        return np.append(self.diag, tail)


def build(points) -> StructuredCompanion:
    """Structured companion of ``points``; the last point plays ``z_n``."""
    z = np.asarray(points, dtype=complex).reshape(-1)
    n = z.size
    if n < 2:
        raise ValueError(f"companion matrix needs n >= 2 points, got {n}")
    d = z[:-1].copy()
    return StructuredCompanion(diag=d, update=(z[-1] - d) / n, n=n, tail=complex(z[-1]))


def matvec(m: StructuredCompanion, x) -> np.ndarray:
    """``M @ x`` in O(order)."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (m.order,):
        raise ValueError(f"vector of length {m.order} expected, got shape {x.shape}")
    return m.diag * x + m.update * x.sum()


def materialize(m: StructuredCompanion) -> np.ndarray:
    """Dense ``(n-1) x (n-1)`` array; oracle use only (order <= 512)."""
    if m.order > DENSE_ORDER_LIMIT:
        raise OracleScopeError(f"dense oracle capped at {DENSE_ORDER_LIMIT}, order {m.order} requested")
    a = np.repeat(m.update[:, None], m.order, axis=1)
    a[np.diag_indices(m.order)] += m.diag
    return a


def _trace_table(m: StructuredCompanion, kmax: int) -> np.ndarray:
    """``Tr(M^k)`` for ``k = 1..kmax``.

    Uses ``Tr(D^a M^b) = Tr(D^(a+1) M^(b-1)) + 1^T D^a M^(b-1) u`` unrolled:

        Tr(M^k) = Tr(D^k) + sum_{j<k} 1^T D^(k-1-j) M^j u.

    The Krylov vectors ``w_j = M^j u`` cost one matvec each, and the
    weighted sums ``q[i, j] = sum d^i * w_j`` fill an O(n kmax^2) table.
    """
    d, u = m.diag, m.update
    w = np.empty((kmax, m.order), dtype=complex)
    w[0] = u
    for j in range(1, kmax):
        w[j] = d * w[j - 1] + u * w[j - 1].sum()
    powers = np.empty((kmax + 1, m.order), dtype=complex)
    powers[0] = 1.0
    for i in range(1, kmax + 1):
        powers[i] = powers[i - 1] * d
    q = powers[:kmax] @ w.T  # q[i, j] = sum_m d_m^i (w_j)_m
    out = np.empty(kmax, dtype=complex)
    for k in range(1, kmax + 1):
        out[k - 1] = powers[k].sum() + sum(q[k - 1 - j, j] for j in range(k))
    return out


def power_sum_trace(m: StructuredCompanion, k: int) -> complex:
    """Exact ``Tr(M^k)``, i.e. the k-th power sum of the critical points."""
    k = int(k)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return complex(_trace_table(m, k)[-1])


def power_sum_averages(points, kmax: int) -> np.ndarray:
    """``Tr(M^k)/(n-1)`` for ``k = 1..kmax``: averaged critical-point power sums."""
    kmax = int(kmax)
    if kmax < 1:
        raise ValueError(f"kmax must be >= 1, got {kmax}")
    m = build(points)
    return _trace_table(m, kmax) / m.order


def dense_eigenvalues(m: StructuredCompanion, polish: bool = True, tol: float = 1e-12) -> np.ndarray:
    """Eigenvalues of the materialized matrix via LAPACK.

    At a multiple critical point the matrix has a Jordan block and LAPACK
    scatters the eigenvalue over a ring of radius about ``eps**(1/m)``;
    with ``polish`` such clusters are replaced by their centroids.
    """
    eig = np.linalg.eigvals(materialize(m))
    if polish and eig.size > 1:
        from ._clusters import newton_sizes, polish_clusters
        from .root_poly import from_roots

        p = from_roots(m.points())
        eig, _ = polish_clusters(p, eig, newton_sizes(p, eig), tol)
    return eig

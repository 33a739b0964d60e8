"""Monic polynomials stored by their roots.

``p(z) = prod_j (z - zeta_j) ** m_j`` is never expanded into coefficients
except by :func:`coefficients`, a small-degree oracle for tests.  The
scaled logarithmic derivative ``S(z) = p'(z)/p(z) = sum_j m_j/(z - zeta_j)``
is the workhorse of the critical point solver.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import OracleScopeError, PoleError

COEFFICIENT_DEGREE_LIMIT = 512


@dataclass(frozen=True, eq=False)
class RootPoly:
    """Distinct roots with multiplicities.

    Attributes
    ----------
    distinct_roots : complex ndarray of shape (d,)
        Pairwise bit-distinct roots, in order of first appearance.
    multiplicities : int ndarray of shape (d,)
    degree : int
        ``sum(multiplicities)``.
    """

    distinct_roots: np.ndarray
    multiplicities: np.ndarray
    degree: int

    def __post_init__(self):
        if self.degree != int(np.sum(self.multiplicities)):
            raise ValueError("degree must equal the sum of multiplicities")
        if len(self.distinct_roots) != len(self.multiplicities):
            raise ValueError("roots and multiplicities differ in length")

    @property
    def n_distinct(self) -> int:
        return len(self.distinct_roots)

    def roots(self) -> np.ndarray:
        """All roots with multiplicity expanded."""
        return np.repeat(self.distinct_roots, self.multiplicities)

    def rotate(self, alpha: float) -> "RootPoly":
        """Polynomial whose roots are ``exp(i*alpha) * zeta_j``."""
        return RootPoly(self.distinct_roots * np.exp(1j * alpha), self.multiplicities, self.degree)

    def conjugate(self) -> "RootPoly":
        return RootPoly(np.conj(self.distinct_roots), self.multiplicities, self.degree)

    def __repr__(self) -> str:
        return f"RootPoly(degree={self.degree}, distinct={self.n_distinct})"


def from_roots(points) -> RootPoly:
    """Group bit-identical points into ``(root, multiplicity)`` pairs."""
    z = np.ascontiguousarray(np.asarray(points, dtype=complex).reshape(-1))
    if z.size < 2:
        raise ValueError(f"a RootPoly needs at least 2 roots, got {z.size}")
    if not np.all(np.isfinite(z)):
        raise ValueError("roots must be finite")
    # group on the raw bit patterns, never on a floating tolerance
    keys = z.view(np.uint64).reshape(-1, 2)
    _, first, counts = np.unique(keys, axis=0, return_index=True, return_counts=True)
    order = np.argsort(first, kind="stable")
    return RootPoly(z[first[order]].copy(), counts[order].astype(np.int64), int(z.size))


def _check_not_root(p: RootPoly, z: np.ndarray):
    hit = np.isin(z, p.distinct_roots)
    if np.any(hit):
        raise PoleError(f"evaluate at root: {z[hit][0]!r} is a root of the polynomial")


def evaluate(p: RootPoly, z: complex) -> tuple[float, complex]:
    """``p(z)`` as ``(log|p(z)|, p(z)/|p(z)|)``.

    The log form stays finite for degrees in the thousands.  At a root the
    log-magnitude is ``-inf`` and the phase is reported as 1.
    """
    w = complex(z) - p.distinct_roots
    if np.any(w == 0):
        return -np.inf, 1.0 + 0.0j
    logmag = float(np.dot(p.multiplicities, np.log(np.abs(w))))
    phase_angle = float(np.dot(p.multiplicities, np.angle(w)))
    return logmag, complex(np.exp(1j * np.remainder(phase_angle, 2 * np.pi)))


def log_derivative(p: RootPoly, z):
    """``S(z) = sum_j m_j / (z - zeta_j)`` for a scalar or an array of ``z``.

    Raises
    ------
    PoleError
        If any ``z`` is bit-equal to a stored root.
    """
    arr = np.asarray(z, dtype=complex)
    flat = arr.reshape(-1)
    _check_not_root(p, flat)
    out = np.empty(flat.shape, dtype=complex)
    m = p.multiplicities.astype(float)
    step = max(1, 2_000_000 // max(p.n_distinct, 1))
    for lo in range(0, flat.size, step):
        blk = flat[lo:lo + step]
        out[lo:lo + step] = (m / (blk[:, None] - p.distinct_roots)).sum(axis=1)
    return complex(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def log_derivative_prime(p: RootPoly, z):
    """``S'(z) = -sum_j m_j / (z - zeta_j)**2``."""
    arr = np.asarray(z, dtype=complex)
    flat = arr.reshape(-1)
    _check_not_root(p, flat)
    out = np.empty(flat.shape, dtype=complex)
    m = p.multiplicities.astype(float)
    step = max(1, 2_000_000 // max(p.n_distinct, 1))
    for lo in range(0, flat.size, step):
        blk = flat[lo:lo + step]
        out[lo:lo + step] = -(m / (blk[:, None] - p.distinct_roots) ** 2).sum(axis=1)
    return complex(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def coefficients(p: RootPoly) -> np.ndarray:
    """Monomial coefficients in ascending order (test oracle, degree <= 512)."""
    if p.degree > COEFFICIENT_DEGREE_LIMIT:
        raise OracleScopeError(
            f"coefficient oracle is limited to degree {COEFFICIENT_DEGREE_LIMIT}, got {p.degree}")
    c = np.array([1.0 + 0.0j])
    for root in p.roots():
        # multiply by (z - root); ascending order
        c = np.concatenate([[0j], c]) - root * np.concatenate([c, [0j]])
    return c

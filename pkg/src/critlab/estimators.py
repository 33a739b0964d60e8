"""scikit-learn style wrappers.

Each row of ``X`` is one root vector on the unit circle.  Nothing is
learned from data, so ``fit`` only validates parameters and records the
input width; the work happens in ``transform``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import companion
from .differentiator import SolverOptions, critical_points, critical_points_dense
from .root_poly import from_roots
from .validation import check_positive_int, check_root_matrix

_METHODS = ("iterative", "dense")


class CriticalPointSolver(TransformerMixin, BaseEstimator):
    """Map root vectors of length ``n`` to their ``n - 1`` critical points.

    Parameters
    ----------
    method : {"iterative", "dense"}
        Aberth iteration on the logarithmic derivative, or eigenvalues of
        the dense companion matrix (degree <= 512).
    tolerance, max_iterations, restarts
        Passed to :class:`~critlab.differentiator.SolverOptions`.

    Attributes
    ----------
    n_features_in_ : int
    converged_ : ndarray of bool
        Per-row convergence flags from the last ``transform``.
    """

    def __init__(self, method="iterative", tolerance=1e-12, max_iterations=200, restarts=3):
        self.method = method
        self.tolerance = tolerance
        self.max_iterations = max_iterations
        self.restarts = restarts

    def _options(self) -> SolverOptions:
        return SolverOptions(tolerance=self.tolerance, max_iterations=self.max_iterations,
                             restarts=self.restarts)

    def fit(self, X, y=None):
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}, got {self.method!r}")
        self._options()
        X = check_root_matrix(X)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_root_matrix(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} roots per row, solver was fitted with {self.n_features_in_}")
        opts = self._options()
        out = np.empty((X.shape[0], X.shape[1] - 1), dtype=complex)
        ok = np.ones(X.shape[0], dtype=bool)
        for i, row in enumerate(X):
            p = from_roots(row)
            cs = critical_points_dense(p) if self.method == "dense" else critical_points(p, opts)
            out[i] = cs.points
            ok[i] = cs.converged
        self.converged_ = ok
        return out


class PowerSumTransformer(TransformerMixin, BaseEstimator):
    """Averaged critical-point power sums ``Tr(M^k)/(n-1)``, ``k = 1..k_max``.

    No critical points are computed; the traces come from the structured
    companion matrix.
    """

    def __init__(self, k_max=4):
        self.k_max = k_max

    def fit(self, X, y=None):
        check_positive_int(self.k_max, "k_max")
        X = check_root_matrix(X)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_root_matrix(X)
        return np.stack([companion.power_sum_averages(row, self.k_max) for row in X])

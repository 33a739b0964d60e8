"""Critical points of random polynomials with roots on the unit circle."""

__version__ = "0.1.0"

from .circle_measure import CircleMeasure, RootSample, moment, moments, sample, validate
from .companion import StructuredCompanion, power_sum_averages, power_sum_trace
from .differentiator import (CriticalSet, SolverOptions, critical_points, critical_points_dense,
                             matching_distance)
from .empirics import circular_w1, interior_count, ks_distance, to_polar, weyl_sum
from .estimators import CriticalPointSolver, PowerSumTransformer
from .limit_function import IDENTICALLY_ZERO, count_zeros_in_disc, eval_f
from .root_poly import RootPoly, from_roots

__all__ = [
    "CircleMeasure", "RootSample", "moment", "moments", "sample", "validate",
    "StructuredCompanion", "power_sum_averages", "power_sum_trace",
    "CriticalSet", "SolverOptions", "critical_points", "critical_points_dense",
    "matching_distance", "circular_w1", "interior_count", "ks_distance", "to_polar",
    "weyl_sum", "CriticalPointSolver", "PowerSumTransformer", "IDENTICALLY_ZERO",
    "count_zeros_in_disc", "eval_f", "RootPoly", "from_roots",
]

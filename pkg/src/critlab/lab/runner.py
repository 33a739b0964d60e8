"""Seeded trial execution.

Each ``(n, trial)`` pair gets its own seed, derived from the config seed
alone, so results do not depend on the order or the process in which
trials run.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..circle_measure import SEED_MASK, derive_seed, moments, sample
from ..differentiator import critical_points, critical_points_dense, matching_distance
from ..empirics import (circular_w1, empirical_moment, interior_count, ks_distance,
                        radial_moment, to_polar, weyl_sum)
from ..root_poly import from_roots
from .config import ExperimentConfig

#: spawn key of the reference-sample stream
REFERENCE_STREAM = 1


def trial_seed(seed: int, n: int, trial: int) -> int:
    """``seed XOR (n * 10**9 + trial)``, hashed through ``SeedSequence``."""
    return derive_seed((int(seed) ^ (int(n) * 10**9 + int(trial))) & SEED_MASK)


@dataclass(eq=False)
class TrialResult:
    n: int
    trial: int
    seed: int
    converged: bool
    iterations: int
    max_residual: float
    circular_w1: float
    ks_distance: float
    crit_moments: np.ndarray
    radial_moments: np.ndarray
    weyl_sums: np.ndarray
    interior: np.ndarray
    root_moments: np.ndarray
    max_modulus: float
    wall_time: float = 0.0
    dense_match: float = float("nan")
    roots: np.ndarray | None = field(default=None, repr=False)
    critical: np.ndarray | None = field(default=None, repr=False)


@dataclass(eq=False)
class ExperimentReport:
    """Trial results ordered by ``(n, trial)``."""

    config: ExperimentConfig
    trials: list

    @property
    def c(self) -> np.ndarray:
        return moments(self.config.measure, self.config.k_max)

    def __len__(self) -> int:
        return len(self.trials)

    @property
    def any_nonconverged(self) -> bool:
        return any(not t.converged for t in self.trials)


def run_trial(cfg: ExperimentConfig, n: int, trial: int, keep_points: bool = False) -> TrialResult:
    t0 = time.perf_counter()
    seed = trial_seed(cfg.seed, n, trial)
    roots = sample(cfg.measure, n, seed).points
    p = from_roots(roots)
    dense_match = float("nan")
    if cfg.method == "dense":
        cs = critical_points_dense(p)
    else:
        cs = critical_points(p)
        if cfg.method == "both":
            dense_match = matching_distance(cs.points, critical_points_dense(p).points)
    crit = cs.points
    ps = to_polar(crit)
    ref = sample(cfg.measure, n - 1, derive_seed(seed, REFERENCE_STREAM))
    ks = range(1, cfg.k_max + 1)
    return TrialResult(
        n=n, trial=trial, seed=seed,
        converged=cs.converged, iterations=cs.iterations, max_residual=cs.max_residual,
        circular_w1=circular_w1(ps.angles, ref.angles),
        ks_distance=ks_distance(ps.angles, cfg.measure),
        crit_moments=np.array([empirical_moment(crit, k) for k in ks]),
        radial_moments=np.array([radial_moment(ps, k) for k in ks]),
        weyl_sums=np.array([weyl_sum(ps, k) for k in ks]),
        interior=np.array([interior_count(crit, r) for r in cfg.radii], dtype=int),
        root_moments=np.array([empirical_moment(roots, k) for k in ks]),
        max_modulus=float(ps.radii.max()),
        wall_time=time.perf_counter() - t0,
        dense_match=dense_match,
        roots=roots if keep_points else None,
        critical=crit if keep_points else None,
    )


def _job(args):
    return run_trial(*args)


def run_experiment(cfg: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    """Run every ``(n, trial)`` of ``cfg``.

    Solver non-convergence is recorded in the row, never raised.  Trial 0
    of each ``n`` keeps its roots and critical points for plotting.
    """
    tasks = [(cfg, n, t, t == 0) for n in cfg.n_values for t in range(cfg.trials)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_job, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_job(t) for t in tasks]
    results.sort(key=lambda r: (r.n, r.trial))
    return ExperimentReport(config=cfg, trials=results)

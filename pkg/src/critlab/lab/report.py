"""CSV reports.

``rows.csv`` has one row per ``(n, trial)`` and this frozen column order:

    n, trial, seed, converged, iterations, max_residual, circular_w1,
    ks_distance, crit_moment_1..K, radial_moment_1..K, weyl_1..K,
    interior_<r> for each radius

(``8 + 3K + len(radii)`` columns).  Complex values are written as Python
complex literals without parentheses (``0.25-0.5j``) and reals with
``repr``, so values round-trip exactly.  ``rows.csv``, ``aggregate.csv``
and ``root_moments.csv`` depend only on the config; wall times go to
``diagnostics.csv``, which is not reproducible.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .. import __version__
from .config import parse_config
from .runner import ExperimentReport, TrialResult

BASE_COLUMNS = ("n", "trial", "seed", "converged", "iterations", "max_residual",
                "circular_w1", "ks_distance")


def _radius_tag(r: float) -> str:
    return f"interior_{r!r}"


def row_columns(k_max: int, radii) -> list[str]:
    ks = range(1, k_max + 1)
    return (list(BASE_COLUMNS) + [f"crit_moment_{k}" for k in ks]
            + [f"radial_moment_{k}" for k in ks] + [f"weyl_{k}" for k in ks]
            + [_radius_tag(r) for r in radii])


def aggregate_columns(k_max: int, radii) -> list[str]:
    names = (["iterations", "max_residual", "circular_w1", "ks_distance"]
             + [f"crit_moment_err_{k}" for k in range(1, k_max + 1)]
             + [f"radial_moment_{k}" for k in range(1, k_max + 1)]
             + [f"weyl_err_{k}" for k in range(1, k_max + 1)]
             + [_radius_tag(r) for r in radii])
    return ["n", "trials", "converged_fraction"] + [f"{s}_{x}" for x in names for s in ("median", "iqr")]


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (complex, np.complexfloating)):
        return repr(complex(v)).strip("()")
    return repr(float(v))


def _row(t: TrialResult) -> list[str]:
    vals = [t.n, t.trial, t.seed, t.converged, t.iterations, t.max_residual,
            t.circular_w1, t.ks_distance]
    vals += list(t.crit_moments) + list(t.radial_moments) + list(t.weyl_sums) + list(t.interior)
    return [fmt(v) for v in vals]


def _aggregate(rep: ExperimentReport) -> list[list[str]]:
    c = rep.c
    out = []
    for n in rep.config.n_values:
        ts = [t for t in rep.trials if t.n == n]
        if not ts:
            continue
        cols = [
            [t.iterations for t in ts], [t.max_residual for t in ts],
            [t.circular_w1 for t in ts], [t.ks_distance for t in ts],
        ]
        cols += [[abs(t.crit_moments[k] - c[k]) for t in ts] for k in range(len(c))]
        cols += [[t.radial_moments[k] for t in ts] for k in range(len(c))]
        cols += [[abs(t.weyl_sums[k] - c[k]) for t in ts] for k in range(len(c))]
        cols += [[t.interior[j] for t in ts] for j in range(len(rep.config.radii))]
        row = [fmt(n), fmt(len(ts)), fmt(float(np.mean([t.converged for t in ts])))]
        for col in cols:
            q25, q50, q75 = np.percentile(np.asarray(col, dtype=float), [25, 50, 75])
            row += [fmt(q50), fmt(q75 - q25)]
        out.append(row)
    return out


def _write_csv(path: Path, header, rows):
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit_report(rep: ExperimentReport, directory) -> list[Path]:
    """Write the report files into ``directory`` (created if missing).

    Returns the written paths.  An empty report yields header-only CSVs.
    """
    d = Path(directory)
    try:
        d.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create report directory {d}: {exc.strerror or exc}") from exc
    cfg = rep.config
    ks = range(1, cfg.k_max + 1)
    written = []

    def out(name):
        written.append(d / name)
        return d / name

    _write_csv(out("rows.csv"), row_columns(cfg.k_max, cfg.radii), [_row(t) for t in rep.trials])
    _write_csv(out("aggregate.csv"), aggregate_columns(cfg.k_max, cfg.radii), _aggregate(rep))
    _write_csv(out("root_moments.csv"), ["n", "trial", "seed"] + [f"root_moment_{k}" for k in ks],
               [[fmt(t.n), fmt(t.trial), fmt(t.seed)] + [fmt(v) for v in t.root_moments]
                for t in rep.trials])
    _write_csv(out("diagnostics.csv"),
               ["n", "trial", "seed", "wall_time_s", "max_modulus", "dense_match_distance"],
               [[fmt(t.n), fmt(t.trial), fmt(t.seed), fmt(t.wall_time), fmt(t.max_modulus),
                 fmt(t.dense_match)] for t in rep.trials])

    manifest = [f"critlab {__version__}", f"measure {cfg.measure.describe()}",
                f"trials {len(rep.trials)}", "", "[config]", cfg.to_yaml().rstrip(), "",
                "[seeds]", "n trial seed"]
    manifest += [f"{t.n} {t.trial} {t.seed}" for t in rep.trials]
    try:
        out("manifest.txt").write_text("\n".join(manifest) + "\n", encoding="utf-8")
        out("config.yaml").write_text(cfg.to_yaml(), encoding="utf-8")
        samples = {}
        for t in rep.trials:
            if t.roots is not None:
                samples[f"roots_{t.n}_{t.trial}"] = t.roots
                samples[f"critical_{t.n}_{t.trial}"] = t.critical
        np.savez(out("samples.npz"), **samples)
    except OSError as exc:
        raise OSError(f"cannot write report into {d}: {exc.strerror or exc}") from exc
    return written


def _read_csv(path: Path):
    if not path.exists():
        raise FileNotFoundError(f"missing report file {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        r = csv.reader(fh)
        header = next(r)
        return header, [dict(zip(header, row)) for row in r]


def load_report(directory) -> ExperimentReport:
    """Rebuild a report from the files written by :func:`emit_report`."""
    d = Path(directory)
    cfg = parse_config((d / "config.yaml").read_text(encoding="utf-8"))
    _, rows = _read_csv(d / "rows.csv")
    _, roots = _read_csv(d / "root_moments.csv")
    _, diag = _read_csv(d / "diagnostics.csv")
    samples = {}
    if (d / "samples.npz").exists():
        with np.load(d / "samples.npz") as z:
            samples = {k: z[k] for k in z.files}
    ks = range(1, cfg.k_max + 1)
    trials = []
    for row, rm, dg in zip(rows, roots, diag):
        n, trial = int(row["n"]), int(row["trial"])
        trials.append(TrialResult(
            n=n, trial=trial, seed=int(row["seed"]),
            converged=row["converged"] == "true", iterations=int(row["iterations"]),
            max_residual=float(row["max_residual"]), circular_w1=float(row["circular_w1"]),
            ks_distance=float(row["ks_distance"]),
            crit_moments=np.array([complex(row[f"crit_moment_{k}"]) for k in ks]),
            radial_moments=np.array([float(row[f"radial_moment_{k}"]) for k in ks]),
            weyl_sums=np.array([complex(row[f"weyl_{k}"]) for k in ks]),
            interior=np.array([int(row[_radius_tag(r)]) for r in cfg.radii], dtype=int),
            root_moments=np.array([complex(rm[f"root_moment_{k}"]) for k in ks]),
            max_modulus=float(dg["max_modulus"]), wall_time=float(dg["wall_time_s"]),
            dense_match=float(dg["dense_match_distance"]),
            roots=samples.get(f"roots_{n}_{trial}"), critical=samples.get(f"critical_{n}_{trial}"),
        ))
    return ExperimentReport(config=cfg, trials=trials)


def median_w1_by_n(rep: ExperimentReport) -> tuple[np.ndarray, np.ndarray]:
    ns = [n for n in rep.config.n_values if any(t.n == n for t in rep.trials)]
    med = [float(np.median([t.circular_w1 for t in rep.trials if t.n == n])) for n in ns]
    return np.array(ns), np.array(med)


__all__ = ["emit_report", "load_report", "row_columns", "aggregate_columns", "median_w1_by_n",
           "BASE_COLUMNS", "fmt"]

"""Command-line entry point: ``critlab {simulate,trace-check,limit-zeros,plot}``.

Exit codes: 0 success, 1 check failed, 2 configuration error, 3 solver
non-convergence (with ``--fail-on-nonconverged``).
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import companion
from .circle_measure import sample
from .exceptions import ConfigError, ContourError, MeasureError, OracleScopeError
from .lab import emit_plots, emit_report, load_report, parse_config, parse_measure_tag, run_experiment
from .limit_function import IDENTICALLY_ZERO, count_zeros_in_disc

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NONCONVERGED = 0, 1, 2, 3
TRACE_TOL = 1e-9

log = logging.getLogger("critlab")


def _simulate(args) -> int:
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc.strerror or exc}") from exc
    cfg = parse_config(text, strict=args.strict)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    out = Path(args.output or cfg.output_dir)
    rep = run_experiment(cfg, jobs=args.jobs)
    emit_report(rep, out)
    if not args.no_plots:
        emit_plots(rep, out)
    bad = sum(not t.converged for t in rep.trials)
    print(f"{len(rep.trials)} trials written to {out}; {bad} not converged")
    if bad and args.fail_on_nonconverged:
        return EXIT_NONCONVERGED
    return EXIT_OK


def _trace_check(args) -> int:
    if args.n > companion.DENSE_ORDER_LIMIT:
        raise ConfigError(f"dense oracle capped at {companion.DENSE_ORDER_LIMIT}, got --n {args.n}")
    if args.n < 2 or args.k < 1:
        raise ConfigError("need --n >= 2 and --k >= 1")
    m = parse_measure_tag(args.measure)
    roots = sample(m, args.n, args.seed).points
    mat = companion.build(roots)
    eig = companion.dense_eigenvalues(mat)
    worst = 0.0
    print("k  structured  dense  rel_err")
    for k in range(1, args.k + 1):
        fast = companion.power_sum_trace(mat, k)
        slow = complex(np.sum(eig ** k))
        rel = abs(fast - slow) / max(float(np.sum(np.abs(eig) ** k)), np.finfo(float).tiny)
        worst = max(worst, rel)
        print(f"{k} {fast:.12g} {slow:.12g} {rel:.3e}")
    print(f"max relative error {worst:.3e} (tolerance {TRACE_TOL:g})")
    return EXIT_OK if worst <= TRACE_TOL else EXIT_FAIL


def _limit_zeros(args) -> int:
    m = parse_measure_tag(args.measure)
    if not 0 < args.r < 1:
        raise ConfigError(f"--r must lie in (0, 1), got {args.r}")
    try:
        count = count_zeros_in_disc(m, args.r)
    except ContourError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print("identically-zero" if count is IDENTICALLY_ZERO else count)
    return EXIT_OK


def _plot(args) -> int:
    rep = load_report(args.report_dir)
    for p in emit_plots(rep, args.output or args.report_dir):
        print(p)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="critlab", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run an experiment config and write the report")
    s.add_argument("config")
    s.add_argument("--seed", type=int, help="override the config seed")
    s.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    s.add_argument("--strict", action=argparse.BooleanOptionalAction, default=True,
                   help="reject unknown config keys (default on)")
    s.add_argument("--fail-on-nonconverged", action="store_true",
                   help="exit 3 if any trial did not converge")
    s.add_argument("--output", help="report directory (default: output_dir from the config)")
    s.add_argument("--no-plots", action="store_true")
    s.set_defaults(func=_simulate)

    t = sub.add_parser("trace-check", help="structured vs dense power sums of critical points")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--seed", type=int, required=True)
    t.add_argument("--measure", default="uniform")
    t.set_defaults(func=_trace_check)

    z = sub.add_parser("limit-zeros", help="zeros of the limit function in |z| < r")
    z.add_argument("--measure", required=True, help="e.g. 'atomic(0:0.5,0.5:0.5)' or 'arc(0,0.5)'")
    z.add_argument("--r", type=float, required=True)
    z.set_defaults(func=_limit_zeros)

    p = sub.add_parser("plot", help="regenerate SVG figures from a report directory")
    p.add_argument("report_dir")
    p.add_argument("--output")
    p.set_defaults(func=_plot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, MeasureError, OracleScopeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

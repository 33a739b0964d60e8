import csv
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from critlab.circle_measure import CircleMeasure, derive_seed
from critlab.exceptions import ConfigError
from critlab.lab import (ExperimentConfig, emit_plots, emit_report, load_report, parse_config,
                         parse_measure_tag, run_experiment, trial_seed)
from critlab.lab.report import BASE_COLUMNS, row_columns
from critlab.lab.runner import ExperimentReport

MINIMAL = """\
measure:
  kind: uniform
n_values: [100]
trials: 1
k_max: 4
radii: [0.5]
seed: 1
"""

TWO_POINT = """\
measure:
  kind: atomic
  atoms: [0.0, 0.5]
  weights: [0.5, 0.5]
n_values: [{n}]
trials: {trials}
k_max: 3
radii: [0.5, 0.9]
seed: 5
"""


def _svg_count(path, cls):
    root = ET.parse(path).getroot()
    return sum(1 for el in root.iter() if el.get("class") == cls and el.tag.endswith("circle"))


def test_minimal_config():
    cfg = parse_config(MINIMAL)
    assert cfg.measure.is_uniform and cfg.n_values == (100,) and cfg.k_max == 4
    assert cfg.method == "iterative" and cfg.seed == 1


def test_full_config_roundtrip():
    text = """\
measure:
  kind: mixture
  weights: [0.25, 0.75]
  components:
    - kind: arc
      a: 0.0
      b: 0.5
    - kind: atomic
      atoms: [0.1, 0.6]
n_values: [10, 20]
trials: 2
k_max: 2
radii: [0.3]
seed: 18446744073709551615
method: both
output_dir: out
"""
    cfg = parse_config(text)
    assert cfg.measure.kind == "mixture" and cfg.measure.components[1].weights == (0.5, 0.5)
    assert parse_config(cfg.to_yaml()) == cfg


@pytest.mark.parametrize("text,match", [
    (MINIMAL.replace("seed: 1", "seed: 1\nmethod: dense").replace("[100]", "[1000]"),
     "dense oracle capped at 512"),
    (TWO_POINT.format(n=10, trials=1).replace("[0.5, 0.5]\n", "[0.6, 0.6]\n"), "line 4"),
    (MINIMAL + "colour: red\n", "line 8: unknown key 'colour'"),
    (MINIMAL.replace("[100]", "[100, 50]"), "strictly increasing"),
    (MINIMAL.replace("[100]", "[1]"), ">= 2"),
    (MINIMAL.replace("trials: 1", "trials: 0"), "trials"),
    (MINIMAL.replace("trials: 1", "trials: one"), "line 4: trials must be an integer"),
    (MINIMAL.replace("radii: [0.5]", "radii: [1.5]"), "radii"),
    (MINIMAL.replace("seed: 1", "seed: -3"), "64-bit"),
    (MINIMAL.replace("kind: uniform", "kind: gaussian"), "line 2: unknown measure kind"),
    (MINIMAL.replace("kind: uniform", "kind: arc\n  a: 0.5\n  b: 0.2"), "a < b"),
    (MINIMAL.replace("k_max: 4\n", ""), "missing required key 'k_max'"),
    ("measure: [1, 2\n", "malformed"),
    ("", "empty"),
])
def test_config_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(text)


def test_atomic_weight_error_propagates():
    with pytest.raises(ConfigError, match="sum"):
        parse_config(TWO_POINT.format(n=10, trials=1).replace("[0.5, 0.5]\n", "[0.6, 0.6]\n"))


def test_non_strict_ignores_unknown_keys():
    with pytest.warns(UserWarning, match="colour"):
        cfg = parse_config(MINIMAL + "colour: red\n", strict=False)
    assert cfg.trials == 1


def test_measure_tags():
    for m in (CircleMeasure.uniform(), CircleMeasure.atomic([0.0, 0.5], [0.5, 0.5]),
              CircleMeasure.arc(0.1, 0.6),
              CircleMeasure.mixture([CircleMeasure.uniform(), CircleMeasure.atomic([0.25])], [0.5, 0.5])):
        assert parse_measure_tag(m.describe()) == m
    assert parse_measure_tag("atomic(0, 0.5)").weights == (0.5, 0.5)
    for bad in ("gauss", "arc(0.5,0.1)", "atomic()", "atomic(0:0.3)"):
        with pytest.raises(ConfigError):
            parse_measure_tag(bad)


def test_trial_seed():
    assert trial_seed(7, 100, 3) == derive_seed(7 ^ (100 * 10**9 + 3))
    seeds = {trial_seed(7, n, t) for n in (10, 20) for t in range(50)}
    assert len(seeds) == 100


def test_report_schema_and_determinism(tmp_path):
    cfg = parse_config(TWO_POINT.format(n="30, 60", trials=3))
    rep = run_experiment(cfg)
    assert len(rep) == 6 and [(t.n, t.trial) for t in rep.trials] == sorted((t.n, t.trial) for t in rep.trials)
    emit_report(rep, tmp_path / "a")
    emit_report(run_experiment(cfg, jobs=2), tmp_path / "b")
    for name in ("rows.csv", "aggregate.csv", "root_moments.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    with open(tmp_path / "a" / "rows.csv") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    assert len(header) == 8 + 3 * cfg.k_max + len(cfg.radii)
    assert ",".join(header) == (
        "n,trial,seed,converged,iterations,max_residual,circular_w1,ks_distance,"
        "crit_moment_1,crit_moment_2,crit_moment_3,radial_moment_1,radial_moment_2,radial_moment_3,"
        "weyl_1,weyl_2,weyl_3,interior_0.5,interior_0.9")
    assert tuple(header[:8]) == BASE_COLUMNS and header == row_columns(3, (0.5, 0.9))
    assert len(rows) == 1 + 6
    assert [int(r[2]) for r in rows[1:]] == [t.seed for t in rep.trials]
    assert {r[header.index("interior_0.5")] for r in rows[1:]} == {"1"}
    with open(tmp_path / "a" / "aggregate.csv") as fh:
        agg = list(csv.reader(fh))
    assert len(agg) == 1 + len(cfg.n_values)
    manifest = (tmp_path / "a" / "manifest.txt").read_text()
    assert "critlab 0.1.0" in manifest and str(rep.trials[-1].seed) in manifest


def test_empty_report_headers_only(tmp_path):
    cfg = parse_config(MINIMAL)
    emit_report(ExperimentReport(config=cfg, trials=[]), tmp_path)
    for name in ("rows.csv", "aggregate.csv", "root_moments.csv", "diagnostics.csv"):
        assert len((tmp_path / name).read_text().splitlines()) == 1
    with pytest.raises(ValueError):
        emit_plots(ExperimentReport(config=cfg, trials=[]), tmp_path)


def test_report_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    rep = run_experiment(parse_config(MINIMAL.replace("[100]", "[5]")))
    with pytest.raises(OSError, match="file"):
        emit_report(rep, blocker / "sub")


def test_degenerate_two_point_trial():
    cfg = parse_config(TWO_POINT.format(n=2, trials=12))
    rep = run_experiment(cfg)
    forced = [t for t in rep.trials if np.all(t.root_moments == 1)]
    assert forced, "expected some trial with both roots at 1"
    for t in rep.trials:
        vals = [t.circular_w1, t.ks_distance, *t.radial_moments, *np.abs(t.crit_moments), *np.abs(t.weyl_sums)]
        assert np.all(np.isfinite(vals)) and t.converged
    t = forced[0]
    assert np.all(t.crit_moments == 1) and t.max_modulus == 1


def test_interior_count_two_point():
    rep = run_experiment(parse_config(TWO_POINT.format(n=500, trials=3)))
    assert all(t.interior[0] == 1 for t in rep.trials)


def test_median_w1_decreases():
    cfg = parse_config(MINIMAL.replace("[100]", "[50, 200, 800]").replace("trials: 1", "trials: 20")
                       .replace("seed: 1", "seed: 7"))
    rep = run_experiment(cfg)
    med = [np.median([t.circular_w1 for t in rep.trials if t.n == n]) for n in cfg.n_values]
    assert med[0] > med[1] > med[2]


def test_both_method_records_dense_match(tmp_path):
    cfg = parse_config(TWO_POINT.format(n="8, 40", trials=2).replace("seed: 5", "seed: 5\nmethod: both"))
    rep = run_experiment(cfg)
    assert all(t.dense_match <= 1e-8 for t in rep.trials)
    dense = run_experiment(parse_config(MINIMAL.replace("seed: 1", "seed: 1\nmethod: dense")))
    assert dense.trials[0].iterations == 0


def test_plots_and_reload(tmp_path):
    cfg = parse_config(MINIMAL.replace("[100]", "[50, 100, 200]").replace("trials: 1", "trials: 4"))
    rep = run_experiment(cfg)
    emit_report(rep, tmp_path)
    paths = emit_plots(rep, tmp_path)
    assert {p.name for p in paths} == {"scatter_n200.svg", "angles.svg", "convergence.svg"}
    for p in paths:
        ET.parse(p)  # well-formed
    scatter = tmp_path / "scatter_n200.svg"
    assert _svg_count(scatter, "root") + _svg_count(scatter, "critical") == 200 + 199
    loaded = load_report(tmp_path)
    assert loaded.config == cfg and len(loaded) == len(rep)
    assert all(np.array_equal(a.crit_moments, b.crit_moments) for a, b in zip(rep.trials, loaded.trials))
    assert np.array_equal(loaded.trials[-4].critical, rep.trials[-4].critical)
    again = emit_plots(loaded, tmp_path / "again")
    assert [p.read_bytes() for p in again] == [p.read_bytes() for p in paths]


def test_convergence_curve_monotone_for_uniform(tmp_path):
    cfg = parse_config(MINIMAL.replace("[100]", "[50, 200, 800]").replace("trials: 1", "trials: 20")
                       .replace("seed: 1", "seed: 7"))
    rep = run_experiment(cfg)
    emit_plots(rep, tmp_path)
    root = ET.parse(tmp_path / "convergence.svg").getroot()
    line = next(el for el in root.iter() if el.get("class") == "median-w1" and el.tag.endswith("polyline"))
    ys = [float(p.split(",")[1]) for p in line.get("points").split()]
    # SVG y grows downwards: a decreasing median plots as increasing y
    assert ys == sorted(ys) and len(set(ys)) == 3


def test_histogram_shows_atoms(tmp_path):
    rep = run_experiment(parse_config(TWO_POINT.format(n=100, trials=1)))
    emit_plots(rep, tmp_path)
    root = ET.parse(tmp_path / "angles.svg").getroot()
    assert sum(1 for el in root.iter() if el.get("class") == "atom") == 2


def test_config_dataclass_checks():
    with pytest.raises(ConfigError):
        ExperimentConfig(measure=CircleMeasure.uniform(), n_values=(), trials=1, k_max=1, radii=(), seed=0)
    cfg = parse_config(MINIMAL)
    assert cfg.with_seed(9).seed == 9

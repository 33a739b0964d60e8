"""Experiment runner: config parsing, seeded trials, CSV reports, SVG figures."""

from .config import ExperimentConfig, parse_config, parse_measure_tag
from .plots import emit_plots
from .report import emit_report, load_report
from .runner import ExperimentReport, TrialResult, run_experiment, trial_seed

__all__ = ["ExperimentConfig", "parse_config", "parse_measure_tag", "emit_plots", "emit_report",
           "load_report", "ExperimentReport", "TrialResult", "run_experiment", "trial_seed"]

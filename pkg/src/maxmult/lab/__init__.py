"""Experiment harness: configs, the seeded corpus, experiments, reports and the CLI."""

from .config import default_config, load_config, refine
from .experiments import EXPERIMENTS, run_experiment
from .reports import ExperimentReport

__all__ = ["EXPERIMENTS", "run_experiment", "default_config", "load_config", "refine", "ExperimentReport"]

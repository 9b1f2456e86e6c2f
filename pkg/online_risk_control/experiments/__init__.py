"""Experiment configuration, trial runner, parameter sweep and command line."""
from .config import ConfigError, ExperimentConfig, load_config, parse_config, set_dotted
from .runner import ExperimentResult, TrialResult, run_experiment, run_trial
from .sweep import SweepResult, rank_grid, sweep

__all__ = ["ConfigError", "ExperimentConfig", "load_config", "parse_config", "set_dotted", "ExperimentResult",
           "TrialResult", "run_experiment", "run_trial", "SweepResult", "rank_grid", "sweep"]

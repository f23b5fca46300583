"""Experiment kinds, sweep axes and the runner."""

from .base import ExperimentConfig, ExperimentOutcome, ResultRow, Series, SweepAxis
from .registry import get_experiment_class, list_experiments, make_experiment, register_experiment

__all__ = [
    "ExperimentConfig",
    "ExperimentOutcome",
    "ResultRow",
    "Series",
    "SweepAxis",
    "get_experiment_class",
    "list_experiments",
    "make_experiment",
    "register_experiment",
]

"""Experiment config loading and validation."""

from .loader import (
    DEFAULTS_PATH,
    build_experiment_config,
    build_network,
    deep_merge,
    load_defaults,
    load_experiment_config,
    load_yaml,
    resolve_document,
)

__all__ = [
    "DEFAULTS_PATH",
    "build_experiment_config",
    "build_network",
    "deep_merge",
    "load_defaults",
    "load_experiment_config",
    "load_yaml",
    "resolve_document",
]

"""Experiment registry: kind name -> Experiment class."""

from __future__ import annotations
from typing import Dict, List, Type

from .base import Experiment
from .capacity_sweep import CapacitySweep
from .ccdf import InterferenceCcdf
from .gain_curve import GainCurve
from .spread_spectrum import SpreadSpectrum
from .success_curve import SuccessCurve
from .validate import Validate

_EXPERIMENTS: Dict[str, Type[Experiment]] = {
    InterferenceCcdf.name: InterferenceCcdf,
    SuccessCurve.name: SuccessCurve,
    GainCurve.name: GainCurve,
    CapacitySweep.name: CapacitySweep,
    SpreadSpectrum.name: SpreadSpectrum,
    Validate.name: Validate,
}


def register_experiment(cls: Type[Experiment]) -> Type[Experiment]:
    """Add an experiment kind; usable as a class decorator."""
    if cls.name in _EXPERIMENTS:
        raise ValueError(f"Experiment '{cls.name}' already registered")
    _EXPERIMENTS[cls.name] = cls
    return cls


def list_experiments() -> List[str]:
    return list(_EXPERIMENTS)


def get_experiment_class(name: str) -> Type[Experiment]:
    if name not in _EXPERIMENTS:
        raise KeyError(
            f"Unknown experiment: {name}. "
            f"Available: {list_experiments()}. "
            f"Register with register_experiment()"
        )
    return _EXPERIMENTS[name]


def make_experiment(name: str) -> Experiment:
    return get_experiment_class(name)()

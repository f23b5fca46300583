"""Experiment plugin interface.

An experiment:
- receives a resolved `ExperimentConfig`
- evaluates its metrics at every sweep point of every series
- returns `ResultRow`s (one per sweep point, metric and method)
- may attach diagnostics and a validation ledger for the JSON sidecar

Experiments never write files; the runner owns output.
"""

from __future__ import annotations
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from ..montecarlo.config import NetworkConfig, SimSpec
from ..pgfl.quadrature import QuadratureSpec

ANALYTIC = "analytic"
MONTECARLO = "montecarlo"
BOUND_LOWER = "bound-lower"
BOUND_UPPER = "bound-upper"
METHODS = (ANALYTIC, MONTECARLO, BOUND_LOWER, BOUND_UPPER)


@dataclass(frozen=True)
class ResultRow:
    param: float
    metric: str
    method: str
    value: float
    uncertainty: float = 0.0
    series: int = 0
    index: int = 0

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"Unknown method tag: {self.method}. Available: {list(METHODS)}")
        if not self.uncertainty >= 0:
            raise ValueError(f"uncertainty must be >= 0, got {self.uncertainty} for {self.metric}")

    @property
    def sort_key(self) -> Tuple[int, int, str, str]:
        return (self.series, self.index, self.metric, self.method)


@dataclass(frozen=True)
class SweepAxis:
    parameter: str
    values: Tuple[float, ...]
    scale: str = "lin"

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Series:
    """One labelled curve: the base network with overrides applied."""

    label: str
    network: NetworkConfig
    options: Dict[str, Any] = field(default_factory=dict)

    def metric(self, name: str) -> str:
        return f"{name}[{self.label}]" if self.label else name


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    series: Tuple[Series, ...]
    sweep: Optional[SweepAxis]
    simulation: SimSpec
    quadrature: QuadratureSpec
    options: Dict[str, Any]
    seed: int = 0
    run_id: str = "run"
    out_dir: str = "runs/run"
    log_dir: Optional[str] = None
    formats: Tuple[str, ...] = ("csv",)
    write_patterns: int = 0
    raw: Dict[str, Any] = field(default_factory=dict)

    @property
    def network(self) -> NetworkConfig:
        return self.series[0].network

    def option(self, name: str, series: Optional[Series] = None, default: Any = None) -> Any:
        """Series-level option, else experiment-level option, else `default`."""
        if series is not None and name in series.options:
            return series.options[name]
        value = self.options.get(name, default)
        return default if value is None else value


@dataclass
class ExperimentOutcome:
    rows: List[ResultRow]
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    ledger: Optional[List[Dict[str, Any]]] = None
    patterns: List[Any] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        if self.ledger is None:
            return True
        return all(entry["passed"] for entry in self.ledger)


class Experiment(ABC):
    name: str = "experiment"
    # sweep parameters this experiment accepts (None: any registered parameter)
    sweep_parameters: Optional[Tuple[str, ...]] = None
    needs_sweep: bool = True

    @abstractmethod
    def run(self, cfg: ExperimentConfig) -> ExperimentOutcome:
        ...

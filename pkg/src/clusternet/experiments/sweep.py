"""Sweep axes and the parameter registry.

Network parameters rewrite the `NetworkConfig` of a sweep point; option
parameters (`epsilon`, `spreading`, `level`) are handed to the experiment
unchanged. New parameters are added with `register_parameter()`.
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Tuple

import numpy as np
from tqdm import tqdm

from ..channel.pathloss import PathLoss
from ..geometry.models import FixedCount, MaternBall, ThomasGaussian
from ..geometry.streams import STREAM_SWEEP, derive_seed
from ..montecarlo.config import NetworkConfig
from .base import ExperimentConfig, Series

Setter = Callable[[NetworkConfig, float], NetworkConfig]

SCALES = ("lin", "log")
OPTION_PARAMETERS = ("epsilon", "spreading", "level")


def _set_cluster_size(cfg: NetworkConfig, v: float) -> NetworkConfig:
    if isinstance(cfg.cluster.count_law, FixedCount):
        if int(v) != v:
            raise ValueError(f"FixedCount cluster size must be an integer, got {v}")
        return cfg.with_cluster(mean_cluster_size=float(v), count_law=FixedCount(int(v)))
    return cfg.with_cluster(mean_cluster_size=v)


def _set_intensity(cfg: NetworkConfig, v: float) -> NetworkConfig:
    """Total intensity λ = λ_p c̄ at fixed c̄."""
    return cfg.with_cluster(parent_intensity=v / cfg.cluster.mean_cluster_size)


def _set_sigma(cfg: NetworkConfig, v: float) -> NetworkConfig:
    if not isinstance(cfg.cluster.scattering, ThomasGaussian):
        raise ValueError("sweep parameter 'sigma' needs Thomas scattering")
    return cfg.with_cluster(scattering=ThomasGaussian(v))


def _set_radius(cfg: NetworkConfig, v: float) -> NetworkConfig:
    if not isinstance(cfg.cluster.scattering, MaternBall):
        raise ValueError("sweep parameter 'radius' needs Matern scattering")
    return cfg.with_cluster(scattering=MaternBall(v))


_PARAMETERS: Dict[str, Setter] = {
    "link_distance": lambda cfg, v: cfg.with_updates(link_distance=v),
    "threshold": lambda cfg, v: cfg.with_updates(threshold=v),
    "noise": lambda cfg, v: cfg.with_updates(noise=v),
    "alpha": lambda cfg, v: cfg.with_updates(pathloss=PathLoss(cfg.pathloss.kind, v)),
    "parent_intensity": lambda cfg, v: cfg.with_cluster(parent_intensity=v),
    "mean_cluster_size": _set_cluster_size,
    "intensity": _set_intensity,
    "sigma": _set_sigma,
    "radius": _set_radius,
}


def register_parameter(name: str, setter: Setter) -> None:
    if name in _PARAMETERS or name in OPTION_PARAMETERS:
        raise ValueError(f"Sweep parameter '{name}' already registered")
    _PARAMETERS[name] = setter


def list_parameters() -> List[str]:
    return sorted(_PARAMETERS) + list(OPTION_PARAMETERS)


def is_option_parameter(name: str) -> bool:
    return name in OPTION_PARAMETERS


def get_setter(name: str) -> Setter:
    if name not in _PARAMETERS:
        raise KeyError(
            f"Unknown sweep parameter: {name}. "
            f"Available: {list_parameters()}. "
            f"Register with register_parameter()"
        )
    return _PARAMETERS[name]


def axis_values(lo: float, hi: float, points: int, scale: str = "lin") -> Tuple[float, ...]:
    if points < 2:
        raise ValueError(f"a sweep needs points >= 2, got {points}")
    if scale == "lin":
        return tuple(float(v) for v in np.linspace(lo, hi, int(points)))
    if scale == "log":
        if not (lo > 0 and hi > 0):
            raise ValueError(f"log sweep needs positive bounds, got [{lo}, {hi}]")
        return tuple(float(v) for v in np.geomspace(lo, hi, int(points)))
    raise ValueError(f"Unknown sweep scale: {scale}. Available: {list(SCALES)}")


@dataclass(frozen=True)
class SweepPoint:
    series_index: int
    index: int
    series: Series
    value: float
    network: NetworkConfig
    seed: int

    def metric(self, name: str) -> str:
        return self.series.metric(name)


def apply_parameter(cfg: NetworkConfig, name: str, value: float) -> NetworkConfig:
    if is_option_parameter(name):
        return cfg
    return get_setter(name)(cfg, float(value))


def series_seed(master_seed: int, series_index: int) -> int:
    return derive_seed(master_seed, STREAM_SWEEP, series_index)


def point_seed(master_seed: int, series_index: int, index: int) -> int:
    return derive_seed(master_seed, STREAM_SWEEP, series_index, index)


def iter_points(cfg: ExperimentConfig) -> Iterator[SweepPoint]:
    """Every (series, sweep point) pair in output order."""
    if cfg.sweep is None:
        raise ValueError(f"experiment '{cfg.kind}' needs a sweep axis")
    for s, series in enumerate(cfg.series):
        for i, value in enumerate(cfg.sweep.values):
            network = apply_parameter(series.network, cfg.sweep.parameter, value)
            yield SweepPoint(s, i, series, float(value), network, point_seed(cfg.seed, s, i))


def progress(cfg: ExperimentConfig, label: str) -> Iterable[SweepPoint]:
    """All sweep points, wrapped in a tqdm bar when `simulation.progress` is set."""
    points = list(iter_points(cfg))
    if not cfg.simulation.progress:
        return points
    return tqdm(points, desc=label, unit="point")

"""Network and simulation configuration shared by the simulators and the metrics."""

from __future__ import annotations
import logging
import os
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from ..channel.fading import FadingModel
from ..channel.pathloss import CLIPPED, PathLoss
from ..geometry.models import ClusterModel

log = logging.getLogger("clusternet.montecarlo")

THREADS_ENV = "CLUSTERNET_THREADS"
# expected points per simulated window before the radius gets capped
MAX_WINDOW_POINTS = 2_000_000

SUCCESS = "success"
INTERFERENCE = "interference"
PURPOSES = (SUCCESS, INTERFERENCE)


@dataclass(frozen=True)
class NetworkConfig:
    """Typical link of length R from the origin to the receiver z = (R, 0).

    The receiver is not part of the transmitter process. Success means
    h·g(z) / (W + I(z)) ≥ T with I(z) summed over the other transmitters.
    """

    cluster: ClusterModel
    pathloss: PathLoss
    fading: FadingModel
    threshold: float
    link_distance: float
    noise: float = 0.0

    def __post_init__(self) -> None:
        if not self.threshold > 0:
            raise ValueError(f"threshold T must be > 0, got {self.threshold}")
        if self.link_distance < 0 or (self.link_distance == 0 and self.pathloss.singular):
            raise ValueError(
                "link_distance R must be > 0 (>= 0 for non-singular path loss), "
                f"got {self.link_distance}"
            )
        if self.noise < 0:
            raise ValueError(f"noise W must be >= 0, got {self.noise}")

    @property
    def receiver(self) -> Tuple[float, float]:
        return (float(self.link_distance), 0.0)

    @property
    def link_gain(self) -> float:
        """g(z)."""
        return float(self.pathloss.radial(self.link_distance))

    def with_updates(self, **changes) -> "NetworkConfig":
        return replace(self, **changes)

    def with_cluster(self, **changes) -> "NetworkConfig":
        return replace(self, cluster=self.cluster.with_updates(**changes))


@dataclass(frozen=True)
class SimSpec:
    trials: int = 100_000
    radius: Optional[float] = None
    seed: int = 0
    tail_tolerance: float = 1e-3
    batch_size: int = 2_000
    workers: int = 1
    progress: bool = False

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.radius is not None and not self.radius > 0:
            raise ValueError(f"simulation radius must be > 0, got {self.radius}")
        if not self.tail_tolerance > 0:
            raise ValueError(f"tail_tolerance must be > 0, got {self.tail_tolerance}")
        if self.batch_size < 1 or self.workers < 1:
            raise ValueError("batch_size and workers must be >= 1")

    def with_updates(self, **changes) -> "SimSpec":
        return replace(self, **changes)


def worker_count(requested: int) -> int:
    """Requested workers, capped by CLUSTERNET_THREADS when set."""
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            return max(1, min(int(requested), int(cap)))
        except ValueError:
            log.warning(f"ignoring non-integer {THREADS_ENV}={cap!r}")
    return max(1, int(requested))


def solve_simulation_radius(
    cfg: NetworkConfig, spec: SimSpec, purpose: str = SUCCESS
) -> float:
    """Radius of the window B(z, R_sim) simulated around the receiver.

    For success simulations λ·E[h]·∫_{‖x‖>R_sim} g(x)dx ≤ δ·g(z)/T, the share
    of interference that could flip an outage decision. For interference
    simulations the tail is held below δ times the mean interference inside
    the window; the unit ball around z bounds that mean from below (with g
    clipped at 1 under singular path loss, where the inside mean is infinite).
    The window always holds the typical point's cluster.
    """
    if purpose not in PURPOSES:
        raise ValueError(f"Unknown simulation purpose: {purpose}. Available: {list(PURPOSES)}")
    if spec.radius is not None:
        return float(spec.radius)
    model = cfg.cluster
    floor = 2.0 * cfg.link_distance + 4.0 * model.reach
    lam = model.intensity
    if lam <= 0:
        return float(floor)
    pl = cfg.pathloss
    if purpose == INTERFERENCE:
        near = PathLoss(CLIPPED, pl.alpha) if pl.singular else pl
        target = spec.tail_tolerance * near.ball_integral(1.0)
    else:
        mean_h = cfg.fading.mean
        if not np.isfinite(mean_h):
            mean_h = cfg.fading.scale
            log.warning(f"{cfg.fading.kind} fading has infinite mean; R_sim uses scale {mean_h:g}")
        target = spec.tail_tolerance * cfg.link_gain / (cfg.threshold * lam * mean_h)
    radius = max(pl.radius_for_tail(target), floor)
    cap = float(np.sqrt(MAX_WINDOW_POINTS / (np.pi * lam)))
    if radius > cap:
        log.warning(f"R_sim={radius:.4g} capped at {cap:.4g} ({MAX_WINDOW_POINTS} expected points)")
        radius = max(cap, floor)
    return float(radius)

"""Brute-force simulators of the typical link.

Each trial draws a pattern on the window B(z, R_sim) around the receiver and
all fading marks from its own substream `(STREAM_PATTERN, trial)`. Trials are
grouped into batches run on a thread pool; batches are reassembled in trial
order, so every output is bit-identical for any number of workers.
"""

from __future__ import annotations
import concurrent.futures as cf
import logging
from dataclasses import dataclass
from typing import Callable, List

import numpy as np
from tqdm import tqdm

from ..channel.pathloss import SINGULAR
from ..geometry.models import PointPattern, Window
from ..geometry.samplers import draw_clusters, draw_palm_extra
from ..geometry.streams import STREAM_PATTERN, substream
from .config import (
    INTERFERENCE,
    SUCCESS,
    NetworkConfig,
    SimSpec,
    solve_simulation_radius,
    worker_count,
)
from .empirical import EmpiricalDistribution, MonteCarloEstimate

log = logging.getLogger("clusternet.montecarlo")

TrialFn = Callable[[np.random.Generator], float]


def _draw_points(cfg: NetworkConfig, window: Window, rng: np.random.Generator, conditioned: bool):
    pts, _, _ = draw_clusters(cfg.cluster, window, rng)
    if conditioned:
        pts = np.vstack((pts, draw_palm_extra(cfg.cluster, window, rng)))
    return pts


def _interference(cfg: NetworkConfig, pts: np.ndarray, rng: np.random.Generator) -> float:
    if pts.shape[0] == 0:
        return 0.0
    h = cfg.fading.sample(rng, pts.shape[0])
    z = np.asarray(cfg.receiver)
    return float(np.sum(h * cfg.pathloss(pts - z)))


def _run_trials(trial: TrialFn, spec: SimSpec, label: str) -> np.ndarray:
    step = spec.batch_size
    bounds = [(s, min(s + step, spec.trials)) for s in range(0, spec.trials, step)]

    def batch(bound) -> np.ndarray:
        start, stop = bound
        return np.array(
            [trial(substream(spec.seed, STREAM_PATTERN, k)) for k in range(start, stop)],
            dtype=np.float64,
        )

    workers = worker_count(spec.workers)
    out: List[np.ndarray] = []
    with tqdm(total=spec.trials, desc=label, unit="trial", disable=not spec.progress) as bar:
        if workers == 1:
            for b in bounds:
                out.append(batch(b))
                bar.update(b[1] - b[0])
        else:
            with cf.ThreadPoolExecutor(max_workers=workers) as ex:
                for b, res in zip(bounds, ex.map(batch, bounds)):
                    out.append(res)
                    bar.update(b[1] - b[0])
    return np.concatenate(out)


def simulation_window(cfg: NetworkConfig, spec: SimSpec, purpose: str = SUCCESS) -> Window:
    radius = solve_simulation_radius(cfg, spec, purpose)
    log.debug(f"R_sim={radius:.6g} around z={cfg.receiver}")
    return Window(cfg.receiver, radius)


def simulate_interference(
    cfg: NetworkConfig, spec: SimSpec, conditioned: bool = True
) -> EmpiricalDistribution:
    """N i.i.d. samples of I(z); `conditioned` adds the typical point's cluster."""
    window = simulation_window(cfg, spec, INTERFERENCE)

    def trial(rng: np.random.Generator) -> float:
        return _interference(cfg, _draw_points(cfg, window, rng, conditioned), rng)

    samples = _run_trials(trial, spec, "interference")
    return EmpiricalDistribution(
        samples,
        {
            "seed": spec.seed,
            "radius": window.radius,
            "conditioned": conditioned,
            "trials": spec.trials,
        },
    )


def empirical_mean_interference(
    cfg: NetworkConfig, spec: SimSpec, conditioned: bool = True
) -> MonteCarloEstimate:
    """Sample mean of I(z) with its standard error.

    Under singular path loss the mean does not exist; the estimate is then
    flagged `diverges` and carries value +inf instead of a sample average.
    """
    if cfg.pathloss.kind == SINGULAR:
        window = simulation_window(cfg, spec, INTERFERENCE)
        log.warning("mean interference diverges under singular path loss; no sample mean reported")
        return MonteCarloEstimate(
            float("inf"), float("nan"), spec.trials, window.radius, diverges=True
        )
    dist = simulate_interference(cfg, spec, conditioned)
    mean, se = dist.mean()
    return MonteCarloEstimate(mean, se, dist.n, dist.tags["radius"])


def simulate_success_probability(cfg: NetworkConfig, spec: SimSpec) -> MonteCarloEstimate:
    """Fraction of trials with h·g(z) ≥ T·(W + I(z)) under the Palm distribution."""
    window = simulation_window(cfg, spec)
    gz = cfg.link_gain

    def trial(rng: np.random.Generator) -> float:
        interference = _interference(cfg, _draw_points(cfg, window, rng, True), rng)
        h = float(cfg.fading.sample(rng, 1)[0])
        return 1.0 if h * gz >= cfg.threshold * (cfg.noise + interference) else 0.0

    hits = _run_trials(trial, spec, "success")
    return _proportion(hits, window.radius)


def _proportion(hits: np.ndarray, radius: float) -> MonteCarloEstimate:
    p = float(hits.mean())
    se = float(np.sqrt(max(p * (1.0 - p), 0.0) / hits.size))
    return MonteCarloEstimate(p, se, int(hits.size), radius)


@dataclass(frozen=True)
class TruncationAudit:
    inner: MonteCarloEstimate
    outer: MonteCarloEstimate
    flips: int

    @property
    def shift(self) -> float:
        return abs(self.outer.value - self.inner.value)

    @property
    def passed(self) -> bool:
        return self.shift <= self.outer.se


def simulate_truncation_audit(
    cfg: NetworkConfig, spec: SimSpec, factor: float = 2.0
) -> TruncationAudit:
    """Success probability on B(z, R_sim) against B(z, factor·R_sim) from the same trials.

    Each pattern is drawn once on the wide window; the inner estimate only
    counts interferers within R_sim of the receiver, so the two estimates
    differ by the outage decisions the far field flips.
    """
    if not factor > 1:
        raise ValueError(f"audit factor must be > 1, got {factor}")
    radius = solve_simulation_radius(cfg, spec)
    wide = Window(cfg.receiver, factor * radius)
    z = np.asarray(cfg.receiver)
    gz = cfg.link_gain

    def trial(rng: np.random.Generator) -> float:
        pts = _draw_points(cfg, wide, rng, True)
        terms = cfg.fading.sample(rng, pts.shape[0]) * cfg.pathloss(pts - z)
        near = np.hypot(pts[:, 0] - z[0], pts[:, 1] - z[1]) <= radius
        signal = float(cfg.fading.sample(rng, 1)[0]) * gz
        inner = signal >= cfg.threshold * (cfg.noise + float(np.sum(terms[near])))
        outer = signal >= cfg.threshold * (cfg.noise + float(np.sum(terms)))
        return float(inner) + 2.0 * float(outer)

    codes = _run_trials(trial, spec, "truncation audit").astype(np.int64)
    inner_hits, outer_hits = (codes & 1).astype(np.float64), (codes >> 1).astype(np.float64)
    audit = TruncationAudit(
        _proportion(inner_hits, radius),
        _proportion(outer_hits, wide.radius),
        int(np.count_nonzero(inner_hits != outer_hits)),
    )
    log.info(
        f"truncation audit: R_sim={radius:.4g} -> {wide.radius:.4g}, "
        f"shift {audit.shift:.3g} (se {audit.outer.se:.3g}, {audit.flips} flipped trials)"
    )
    return audit


def simulate_void_probability(
    cfg: NetworkConfig, spec: SimSpec, radius: float, conditioned: bool
) -> MonteCarloEstimate:
    """Fraction of patterns with no point in B(0, radius)."""
    window = Window((0.0, 0.0), radius + 4.0 * cfg.cluster.reach)

    def trial(rng: np.random.Generator) -> float:
        pts = _draw_points(cfg, window, rng, conditioned)
        return 1.0 if not np.any(np.hypot(pts[:, 0], pts[:, 1]) <= radius) else 0.0

    hits = _run_trials(trial, spec, "void")
    return _proportion(hits, window.radius)


def draw_patterns(
    cfg: NetworkConfig,
    spec: SimSpec,
    count: int,
    conditioned: bool = True,
    purpose: str = SUCCESS,
) -> List[PointPattern]:
    """The patterns of the first `count` trials, exactly as the simulators see them.

    `purpose` selects the window of the simulator they belong to.
    """
    window = simulation_window(cfg, spec, purpose)
    patterns = []
    for k in range(min(int(count), spec.trials)):
        pts = _draw_points(cfg, window, substream(spec.seed, STREAM_PATTERN, k), conditioned)
        patterns.append(PointPattern(pts, window, origin_conditioned=conditioned))
    return patterns

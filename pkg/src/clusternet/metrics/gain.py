"""Clustering gain: clustered success over Poisson success at equal intensity."""

from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from ..geometry.models import PoissonCount
from ..montecarlo.config import NetworkConfig
from ..pgfl.quadrature import QuadratureSpec
from .beta import BetaProfile, _spec, poisson_success, require_rayleigh
from .success import success_terms

log = logging.getLogger("clusternet.metrics")

MONOTONICITY_GRID = (0.05, 0.5, 1.0, 2.0, 4.0)
# below this argument ν(x) = (e^{−x} − 1 + x)/x switches to its series
_SERIES_CUTOFF = 1e-4


def _excess_miss(x):
    """e^{−x} − 1 + x, accurate for small x."""
    x = np.asarray(x, dtype=np.float64)
    series = x * x * (0.5 - x / 6.0 + x * x / 24.0)
    return np.where(x < _SERIES_CUTOFF, series, np.expm1(-x) + x)


@dataclass(frozen=True)
class GainSplit:
    p1: float
    p2: float
    poisson: float
    gain: float
    gain_eta: float

    @property
    def agree(self) -> bool:
        return bool(np.isclose(self.gain, self.gain_eta, rtol=1e-4))


def gain_split(cfg: NetworkConfig, spec: Optional[QuadratureSpec] = None) -> GainSplit:
    """P₁ (other clusters), P₂ (own cluster), P_p(λ) and both forms of G(R).

    The second form is P₂·exp(λ_p ∫ [e^{−c̄β} − 1 + c̄β] dy), i.e.
    P₂·exp(λ_p c̄ ∫ β·ν(c̄β) dy); it is only defined for Poisson cluster sizes.
    """
    require_rayleigh(cfg, "clustering_gain", noise_free=True)
    spec = _spec(spec)
    terms = success_terms(cfg, spec)
    lam = cfg.cluster.intensity
    pp = poisson_success(cfg.pathloss, cfg.threshold, cfg.link_distance, lam, spec)
    gain = terms.t1 * terms.t2 / pp
    gain_eta = float("nan")
    model = cfg.cluster
    if isinstance(model.count_law, PoissonCount):
        cbar = model.mean_cluster_size
        if model.parent_intensity > 0 and cbar > 0:
            profile = BetaProfile.build(cfg, spec)
            excess = profile.integral(
                lambda b: _excess_miss(cbar * b), weight=model.parent_intensity, name="gain_eta"
            )
            gain_eta = terms.t2 * float(np.exp(model.parent_intensity * excess))
        else:
            gain_eta = terms.t2
    return GainSplit(terms.t1, terms.t2, pp, float(gain), float(gain_eta))


def clustering_gain(cfg: NetworkConfig, spec: Optional[QuadratureSpec] = None) -> float:
    """G(R) = P(success) / P_p(λ_p c̄)."""
    return gain_split(cfg, spec).gain


def lambda_star(cfg: NetworkConfig, spec: Optional[QuadratureSpec] = None) -> float:
    """λ* = 2∫β f / ∫β²: G decreases with c̄ at fixed λ iff λ ≤ λ*.

    Only the scattering law, path loss, T and R enter; the cluster intensities
    of `cfg` are ignored.
    """
    profile = BetaProfile.build(cfg, spec)
    kappa = profile.average(name="kappa")
    square = profile.integral(lambda b: b * b, name="beta_square")
    return float(2.0 * kappa / square)


@dataclass(frozen=True)
class MonotonicityLedger:
    intensity: float
    lambda_star: float
    derivatives: Tuple[Tuple[float, float], ...]

    @property
    def predicted_decreasing(self) -> bool:
        return self.intensity <= self.lambda_star

    @property
    def observed_decreasing(self) -> bool:
        return all(d < 0 for _, d in self.derivatives)

    @property
    def consistent(self) -> bool:
        return self.predicted_decreasing == self.observed_decreasing


def gain_monotonicity_check(
    cfg: NetworkConfig,
    spec: Optional[QuadratureSpec] = None,
    grid: Sequence[float] = MONOTONICITY_GRID,
    step: float = 0.05,
) -> MonotonicityLedger:
    """dG/dc̄ by central differences at fixed λ = λ_p c̄, compared with λ ≤ λ*."""
    spec = _spec(spec)
    lam = cfg.cluster.intensity
    if lam <= 0:
        raise ValueError("gain_monotonicity_check needs a positive intensity λ_p·c̄")

    def gain_at(cbar: float) -> float:
        return clustering_gain(
            cfg.with_cluster(parent_intensity=lam / cbar, mean_cluster_size=cbar), spec
        )

    derivatives = []
    for cbar in grid:
        h = step * cbar
        d = (gain_at(cbar + h) - gain_at(cbar - h)) / (2.0 * h)
        log.debug(f"dG/dc at c={cbar:g}: {d:.6g}")
        derivatives.append((float(cbar), float(d)))
    return MonotonicityLedger(lam, lambda_star(cfg, spec), tuple(derivatives))


def gain_crossover(
    cfg: NetworkConfig, r_lo: float, r_hi: float, spec: Optional[QuadratureSpec] = None
) -> Optional[float]:
    """Link distance R* in [r_lo, r_hi] where G(R*) = 1, or None when not bracketed."""
    spec = _spec(spec)

    def excess(r: float) -> float:
        return clustering_gain(cfg.with_updates(link_distance=r), spec) - 1.0

    lo, hi = excess(r_lo), excess(r_hi)
    if np.sign(lo) == np.sign(hi):
        log.info(f"gain does not cross 1 on [{r_lo:g}, {r_hi:g}] (G-1: {lo:.4g}, {hi:.4g})")
        return None
    xtol = max(1e-6 * r_hi, 1e-12)
    return float(optimize.brentq(excess, r_lo, r_hi, xtol=xtol, rtol=max(spec.rel_tol, 4e-16)))


def cluster_factor_limit(cfg: NetworkConfig) -> float:
    """Large-R limit of the own-cluster factor, where β → T/(1 + T).

    For Poisson cluster sizes this is exp(−c̄/(1 + 1/T)).
    """
    model = cfg.cluster
    beta_far = cfg.threshold / (1.0 + cfg.threshold)
    return float(model.count_law.palm_pgf(beta_far, model.mean_cluster_size))

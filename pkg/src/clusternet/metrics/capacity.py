"""Transmission capacity under an outage constraint ε.

Capacity is the largest density of concurrent transmissions whose outage
probability stays at or below ε, times (1 − ε). The Poisson benchmark is

    C_p(ε, T) = (1 − ε)·ln(1/(1 − ε)) / β_I.
"""

from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy import optimize

from ..montecarlo.config import NetworkConfig
from ..pgfl.quadrature import QuadratureSpec
from .beta import (
    BetaProfile,
    BetaSummary,
    _spec,
    beta_summary,
    poisson_beta_integral,
    require_rayleigh,
)
from .success import success_probability

log = logging.getLogger("clusternet.metrics")

BISECTION_ITERATIONS = 60
SEARCH_GRID = tuple(10.0 ** k for k in np.arange(-7.0, 1.5, 0.5))


def _check_epsilon(epsilon: float) -> float:
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"outage constraint epsilon must lie in (0, 1), got {epsilon}")
    return float(epsilon)


def poisson_capacity(beta_i: float, epsilon: float) -> float:
    return float(-(1.0 - epsilon) * np.log1p(-epsilon) / beta_i)


@dataclass(frozen=True)
class ConstrainedCapacity:
    parent_intensity: float
    lower: float
    upper: float
    first_order: float
    exact: float
    mean_cluster_size: float


@dataclass(frozen=True)
class CapacityResult:
    epsilon: float
    poisson: float
    unconstrained: float
    rho: float
    valid: bool
    summary: BetaSummary
    constrained: Optional[ConstrainedCapacity] = None

    @property
    def threshold_epsilon(self) -> float:
        """ε below which C(ε, T) = C_p(ε, T)."""
        return float(-np.expm1(-self.rho))


def transmission_capacity(
    cfg: NetworkConfig,
    epsilon: float,
    spec: Optional[QuadratureSpec] = None,
    *,
    with_constrained: bool = False,
) -> CapacityResult:
    """C_p, ρ(T) = κ/β̂ and the unconstrained capacity when ε < 1 − e^{−ρ(T)}.

    Outside that range only bounds are known and `unconstrained` is NaN.
    """
    require_rayleigh(cfg, "transmission_capacity", noise_free=True)
    epsilon = _check_epsilon(epsilon)
    spec = _spec(spec)
    summary = beta_summary(cfg, spec)
    c_p = poisson_capacity(summary.beta_I, epsilon)
    rho = summary.kappa / summary.beta_hat
    valid = epsilon < -np.expm1(-rho)
    constrained = None
    if with_constrained:
        constrained = constrained_capacity(cfg, epsilon, spec=spec, summary=summary)
    return CapacityResult(
        epsilon, c_p, c_p if valid else float("nan"), float(rho), bool(valid), summary, constrained
    )


def _outage(
    cfg: NetworkConfig, parent_intensity: float, cbar: float, spec: QuadratureSpec
) -> float:
    model = cfg.with_cluster(parent_intensity=parent_intensity, mean_cluster_size=cbar)
    return 1.0 - success_probability(model, spec)


def cluster_size_for_outage(
    cfg: NetworkConfig,
    epsilon: float,
    parent_intensity: float,
    spec: Optional[QuadratureSpec] = None,
) -> float:
    """c̄ with γ(c̄) = ε at fixed λ_p, by bisection (γ is increasing in c̄)."""
    spec = _spec(spec)
    base = _outage(cfg, parent_intensity, 0.0, spec)
    if base >= epsilon:
        return 0.0

    def gap(cbar: float) -> float:
        return _outage(cfg, parent_intensity, cbar, spec) - epsilon

    hi = 1.0
    while gap(hi) <= 0:
        hi *= 2.0
        if hi > 1e12:
            raise ValueError(f"outage never reaches epsilon={epsilon:g}")
    return float(
        optimize.bisect(
            gap,
            0.0,
            hi,
            xtol=1e-300,
            rtol=max(spec.rel_tol, 4e-16),
            maxiter=BISECTION_ITERATIONS,
            disp=False,
        )
    )


def constrained_capacity(
    cfg: NetworkConfig,
    epsilon: float,
    parent_intensity: Optional[float] = None,
    spec: Optional[QuadratureSpec] = None,
    *,
    summary: Optional[BetaSummary] = None,
) -> ConstrainedCapacity:
    """Capacity when the parent intensity λ_p is fixed and only c̄ is free.

    lower       = λ_p C_p / (λ_p + f̂*)
    upper       = λ_p C_p / max(0, λ_p − (β̂/β_I) ln(1/(1 − ε)))   (inf at 0)
    first_order = (1 − ε) ε λ_p / (λ_p β_I + κ)
    exact       = λ_p (1 − ε) c̄* with γ(c̄*) = ε
    """
    require_rayleigh(cfg, "constrained_capacity", noise_free=True)
    epsilon = _check_epsilon(epsilon)
    spec = _spec(spec)
    if parent_intensity is None:
        parent_intensity = cfg.cluster.parent_intensity
    lam_p = float(parent_intensity)
    if not lam_p > 0:
        raise ValueError(f"constrained capacity needs a parent intensity > 0, got {lam_p}")
    summary = summary if summary is not None else beta_summary(cfg, spec)
    c_p = poisson_capacity(summary.beta_I, epsilon)
    lower = lam_p * c_p / (lam_p + summary.f_hat_star)
    denom = lam_p + summary.beta_hat / summary.beta_I * np.log1p(-epsilon)
    upper = lam_p * c_p / denom if denom > 0 else float("inf")
    first = (1.0 - epsilon) * epsilon * lam_p / (lam_p * summary.beta_I + summary.kappa)
    cbar = cluster_size_for_outage(cfg, epsilon, lam_p, spec)
    exact = lam_p * (1.0 - epsilon) * cbar
    log.debug(f"constrained capacity eps={epsilon:g} lam_p={lam_p:g}: c*={cbar:.6g}")
    return ConstrainedCapacity(lam_p, float(lower), float(upper), float(first), float(exact), cbar)


@dataclass(frozen=True)
class SpreadSpectrumComparison:
    spreading: float
    frequency_hopping: float
    direct_sequence: float

    @property
    def log_ratio(self) -> float:
        """ln(C_FH / C_DS) / ln M (NaN for M = 1)."""
        if self.spreading == 1:
            return float("nan")
        return float(np.log(self.frequency_hopping / self.direct_sequence) / np.log(self.spreading))


def spread_spectrum_compare(
    cfg: NetworkConfig, epsilon: float, spreading: float, spec: Optional[QuadratureSpec] = None
) -> SpreadSpectrumComparison:
    """Constrained capacity under frequency hopping and direct sequence with gain M.

    FH splits every cluster over M bands: one band sees c̄/M, so C_FH = M·C*(ε, T).
    DS divides the threshold: C_DS = C*(ε, T/M).
    """
    if spreading < 1:
        raise ValueError(f"spreading gain M must be >= 1, got {spreading}")
    spec = _spec(spec)
    lam_p = cfg.cluster.parent_intensity
    fh = spreading * constrained_capacity(cfg, epsilon, lam_p, spec).exact
    despread = cfg.with_updates(threshold=cfg.threshold / spreading)
    ds = constrained_capacity(despread, epsilon, lam_p, spec).exact
    return SpreadSpectrumComparison(float(spreading), float(fh), float(ds))


@dataclass(frozen=True)
class CapacitySearch:
    intensity: float
    parent_intensity: float
    mean_cluster_size: float
    poisson_bound: float

    @property
    def ratio(self) -> float:
        """Best admissible λ over C_p/(1 − ε)."""
        return float(self.intensity / self.poisson_bound)


def _admissible(profile: BetaProfile, cbar: float, epsilon: float) -> Tuple[float, float]:
    """(λ_p*, λ_p*·c̄) where λ_p* is the largest parent intensity meeting the constraint."""
    miss = profile.integral(lambda b: -np.expm1(-cbar * b), name="search_void")
    own_loss = profile.average(lambda b: -np.expm1(-cbar * b), name="search_cluster")
    # exp(−λ_p·miss)·(1 − own_loss) = 1 − ε
    slack = np.log1p(-own_loss) - np.log1p(-epsilon)
    if slack <= 0 or miss <= 0:
        return 0.0, 0.0
    lam_p = float(slack / miss)
    return lam_p, lam_p * cbar


def unconstrained_capacity_search(
    cfg: NetworkConfig, epsilon: float, spec: Optional[QuadratureSpec] = None
) -> CapacitySearch:
    """Largest admissible λ = λ_p c̄ over both parameters.

    A log grid in c̄ locates the best cell; a bounded search refines it.
    """
    require_rayleigh(cfg, "unconstrained_capacity_search", noise_free=True)
    epsilon = _check_epsilon(epsilon)
    spec = _spec(spec)
    profile = BetaProfile.build(cfg, spec)
    bound = -np.log1p(-epsilon) / poisson_beta_integral(
        cfg.pathloss, cfg.threshold, cfg.link_distance, spec
    )
    grid = np.asarray(SEARCH_GRID)
    values = [_admissible(profile, c, epsilon)[1] for c in grid]
    i = int(np.argmax(values))
    best_c, best = float(grid[i]), float(values[i])
    lo, hi = np.log10(grid[max(i - 1, 0)]), np.log10(grid[min(i + 1, grid.size - 1)])
    if hi > lo:
        res = optimize.minimize_scalar(
            lambda e: -_admissible(profile, 10.0 ** e, epsilon)[1],
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-3},
        )
        if res.success and -res.fun > best:
            best_c, best = float(10.0 ** res.x), float(-res.fun)
    lam_p = best / best_c if best_c > 0 else 0.0
    return CapacitySearch(best, lam_p, best_c, float(bound))

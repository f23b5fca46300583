"""Interference statistics seen by the receiver of the typical link."""

from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..channel.pathloss import CLIPPED, SINGULAR
from ..errors import DivergentMeanError, DivergentMomentError
from ..geometry.models import ThomasGaussian
from ..montecarlo.config import NetworkConfig
from ..pgfl.functional import conditional_pgfl, truncation_radius
from ..pgfl.kernels import Kernel, _markov_exponent, cdf_kernel
from ..pgfl.quadrature import QuadratureSpec, integrate_radial, pair_average, ring_average
from .beta import _spec

log = logging.getLogger("clusternet.metrics")


def _excess_weight(cfg: NetworkConfig) -> float:
    """Σp_n n(n−1)/c̄: expected sibling pairs per point of a cluster."""
    model = cfg.cluster
    cbar = model.mean_cluster_size
    if cbar <= 0:
        return 0.0
    return model.count_law.factorial_moment2(cbar) / cbar


@dataclass(frozen=True)
class CcdfBoundPair:
    y: float
    lower: float
    upper: float
    varphi: float
    theta1: float
    theta2: float
    clipped: bool


def _varphi(cfg: NetworkConfig, y: float, spec: QuadratureSpec) -> float:
    """φ(y) = (1/(yλ)) ∫ g(x−z) ρ⁽²⁾(x) ∫_0^{y/g(x−z)} ν dF_h(ν) dx."""
    model = cfg.cluster
    lam = model.intensity
    if lam <= 0:
        return 0.0
    fading, pl = cfg.fading, cfg.pathloss

    def truncated_mean(rho):
        g = pl.radial(rho)
        finite = np.isfinite(g)
        gs = np.where(finite, g, 1.0)
        return np.where(finite, gs * fading.partial_mean(y / gs), 0.0)

    p = _markov_exponent(fading, pl.alpha)
    if p is None:
        raise DivergentMomentError(
            f"no finite fading moment above 2/alpha for {fading.kind}; φ(y) is not available"
        )
    moment = fading.mean if p == 1.0 else fading.fractional_moment(p)
    rho0 = (moment / y) ** (1.0 / pl.alpha)
    features = tuple(rho0 * k for k in (0.25, 1.0, 4.0)) + ((1.0,) if pl.kind == CLIPPED else ())
    scale = y ** (1.0 - p) * moment * 2.0 * np.pi / (p * pl.alpha - 2.0)
    # g·m₁(y/g) ≤ y^{1−p}·E[h^p]·g^p
    bound = Kernel(
        name="varphi",
        radial_complement=truncated_mean,
        features=features,
        tail=lambda R: float(scale * max(R, 1e-300) ** (2.0 - p * pl.alpha)),
    )
    poisson_part = integrate_radial(
        truncated_mean,
        spec,
        r_out=truncation_radius(bound, spec, reach=0.0, weight=lam),
        features=bound.features,
        name="varphi:poisson",
    ).value
    pairs = model.parent_intensity * model.count_law.factorial_moment2(model.mean_cluster_size)
    cluster_part = 0.0
    if pairs > 0:
        cluster_part = float(
            pair_average(
                truncated_mean,
                cfg.link_distance,
                model.scattering,
                spec,
                features=features,
                name="varphi:pairs",
            )
        )
    return float((lam * lam * poisson_part + pairs * cluster_part) / (y * lam))


def ccdf_bounds(
    cfg: NetworkConfig, y: float, spec: Optional[QuadratureSpec] = None
) -> CcdfBoundPair:
    """Lower and upper bounds on P⁰(I(z) > y).

    lower = 1 − 𝒢(F_h(y/g(· − z)))
    upper = 1 − (1 − φ(y))·𝒢(...), clipped to [lower, 1]
    """
    spec = _spec(spec)
    y = float(y)
    kernel = cdf_kernel(cfg.fading, cfg.pathloss, y, cfg.receiver)
    g_value = conditional_pgfl(kernel, cfg.cluster, spec)
    lower = float(np.clip(1.0 - g_value, 0.0, 1.0))
    varphi = _varphi(cfg, y, spec) if y > 0 else 0.0
    raw = 1.0 - (1.0 - varphi) * g_value
    upper = float(min(max(raw, lower), 1.0))
    clipped = upper != raw
    if clipped:
        log.warning(f"ccdf upper bound clipped at y={y:.6g} (raw={raw:.6g}, varphi={varphi:.6g})")
    theta1 = theta2 = float("nan")
    if cfg.pathloss.kind == SINGULAR:
        try:
            theta1, theta2 = tail_constants(cfg)
        except DivergentMomentError:
            pass
    return CcdfBoundPair(y, lower, upper, varphi, theta1, theta2, clipped)


def tail_constants(cfg: NetworkConfig) -> Tuple[float, float]:
    """θ₁ = π·[λ + (Σp_n n(n−1)/c̄)·(f∗f)(z)]·E[h^{2/α}], θ₂ = 2θ₁/(α − 2).

    The lower CCDF bound behaves like θ₁·y^{−2/α} for large y, the upper one
    like (θ₁ + θ₂)·y^{−2/α}.
    """
    if cfg.pathloss.kind != SINGULAR:
        raise ValueError(f"tail constants need singular path loss, got {cfg.pathloss.kind}")
    a = cfg.pathloss.alpha
    moment = cfg.fading.fractional_moment(2.0 / a)
    selfconv = float(cfg.cluster.scattering.selfconv(cfg.link_distance))
    theta1 = np.pi * (cfg.cluster.intensity + _excess_weight(cfg) * selfconv) * moment
    return float(theta1), float(2.0 * theta1 / (a - 2.0))


def ds_cdma_outage_scaling(cfg: NetworkConfig, spreading: float) -> Tuple[float, float]:
    """Outage bounds for large spreading gain M:

    lower = θ₁·R²·M^{−2/α}·T^{2/α}·E[h^{−2/α}], upper = α/(α − 2)·lower.
    """
    if spreading < 1:
        raise ValueError(f"spreading gain must be >= 1, got {spreading}")
    theta1, _ = tail_constants(cfg)
    a = cfg.pathloss.alpha
    inverse = cfg.fading.fractional_moment(-2.0 / a)
    lower = theta1 * cfg.link_distance ** 2 * (cfg.threshold / spreading) ** (2.0 / a) * inverse
    return float(lower), float(a / (a - 2.0) * lower)


def _mean_h(cfg: NetworkConfig) -> float:
    mean_h = cfg.fading.mean
    if not np.isfinite(mean_h):
        raise DivergentMomentError(f"E[h] is infinite for {cfg.fading.kind} fading")
    return float(mean_h)


def _check_mean(cfg: NetworkConfig) -> float:
    if cfg.pathloss.kind == SINGULAR:
        raise DivergentMeanError(
            "mean interference diverges under singular path loss; use bounded or clipped g"
        )
    return _mean_h(cfg)


def mean_interference(
    cfg: NetworkConfig, conditioned: bool = True, spec: Optional[QuadratureSpec] = None
) -> float:
    """λE[h]∫g, plus (Σp_n n(n−1)/c̄)·E[h]·∫ g(x − z)(f∗f)(x) dx when conditioned."""
    mean_h = _check_mean(cfg)
    poisson = cfg.cluster.intensity * mean_h * cfg.pathloss.plane_integral()
    if not conditioned:
        return float(poisson)
    weight = _excess_weight(cfg)
    if weight == 0:
        return float(poisson)
    excess = pair_average(
        cfg.pathloss.radial, cfg.link_distance, cfg.cluster.scattering, _spec(spec),
        features=(1.0,), name="mean_interference",
    )
    return float(poisson + weight * mean_h * excess)


def mean_interference_thomas(
    cfg: NetworkConfig, conditioned: bool = True, spec: Optional[QuadratureSpec] = None
) -> float:
    """Thomas specialization.

    The Palm excess uses the closed form (f∗f)(x) = e^{−‖x‖²/4σ²}/(4πσ²).
    """
    scattering = cfg.cluster.scattering
    if not isinstance(scattering, ThomasGaussian):
        raise ValueError(f"mean_interference_thomas needs Thomas scattering, got {scattering.kind}")
    mean_h = _check_mean(cfg)
    poisson = cfg.cluster.intensity * mean_h * cfg.pathloss.plane_integral()
    if not conditioned:
        return float(poisson)
    pair_law = ThomasGaussian(scattering.sigma * np.sqrt(2.0))
    excess = ring_average(
        cfg.pathloss.radial,
        cfg.link_distance,
        pair_law,
        _spec(spec),
        features=(1.0,),
        name="mean_interference_thomas",
    )
    return float(poisson + _excess_weight(cfg) * mean_h * excess)

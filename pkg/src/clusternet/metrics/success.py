"""Success probability of the typical link."""

from __future__ import annotations
import logging
from dataclasses import dataclass
from math import factorial
from typing import Optional, Tuple

import numpy as np

from ..channel.fading import NakagamiPower, RayleighPower
from ..errors import DerivativeInstabilityError
from ..geometry.models import FixedCount
from ..montecarlo.config import NetworkConfig
from ..pgfl.functional import conditional_laplace_interference, evaluate_pgfl
from ..pgfl.kernels import outage_kernel
from ..pgfl.quadrature import QuadratureSpec
from .beta import BetaProfile, _spec, beta_summary, poisson_success, require_rayleigh

log = logging.getLogger("clusternet.metrics")

MAX_NAKAGAMI_M = 5


@dataclass(frozen=True)
class SuccessTerms:
    """success = t1 · t2 · noise_factor.

    t1 = exp(−λ_p ∫[1 − M(1 − β(R, y))] dy) accounts for the other clusters,
    t2 = ∫ M⁰(1 − β(R, y)) f(y) dy for the transmitter's own cluster.
    """

    t1: float
    t2: float
    noise_factor: float
    void_integral: float
    r_out: float
    error: float

    @property
    def value(self) -> float:
        return self.t1 * self.t2 * self.noise_factor


def success_terms(cfg: NetworkConfig, spec: Optional[QuadratureSpec] = None) -> SuccessTerms:
    fading = require_rayleigh(cfg, "success_probability")
    kernel = outage_kernel(cfg.pathloss, cfg.threshold, cfg.link_distance, cfg.receiver)
    res = evaluate_pgfl(kernel, cfg.cluster, _spec(spec))
    noise = float(np.exp(-fading.mu * cfg.threshold * cfg.noise / cfg.link_gain))
    return SuccessTerms(
        res.unconditional, res.cluster_factor, noise, res.void_integral, res.r_out, res.error
    )


def success_probability(cfg: NetworkConfig, spec: Optional[QuadratureSpec] = None) -> float:
    """P(h·g(z) ≥ T·(W + I(z))) under the Palm distribution, Rayleigh fading."""
    return success_terms(cfg, spec).value


def success_probability_fixed(cfg: NetworkConfig, spec: Optional[QuadratureSpec] = None) -> float:
    """Fixed cluster size n, written with β̃ = 1 − β:

        exp(−λ_p ∫ 1 − β̃ⁿ dy) · ∫ β̃ⁿ⁻¹ f(y) dy
    """
    require_rayleigh(cfg, "success_probability_fixed", noise_free=True)
    law = cfg.cluster.count_law
    if not isinstance(law, FixedCount):
        raise ValueError(f"success_probability_fixed needs a FixedCount cluster, got {law.kind}")
    n = law.n
    profile = BetaProfile.build(cfg, spec)
    lam_p = cfg.cluster.parent_intensity

    def miss_all(b):
        # 1 − β̃ⁿ with β̃ = 1 − b
        return -np.expm1(n * np.log1p(-np.clip(b, 0.0, 1.0)))

    first = 1.0
    if lam_p > 0:
        void = profile.integral(miss_all, weight=lam_p * n, name="fixed_void")
        first = float(np.exp(-lam_p * void))
    second = 1.0
    if n > 1:
        second = profile.average(
            lambda b: (1.0 - np.clip(b, 0.0, 1.0)) ** (n - 1), name="fixed_cluster"
        )
    return first * second


def _stencil(order: int, half_width: int) -> np.ndarray:
    """Central finite-difference weights for d^order/ds^order on offsets −J..J."""
    j = np.arange(-half_width, half_width + 1, dtype=np.float64)
    vander = np.vander(j, increasing=True).T
    rhs = np.zeros(j.size)
    rhs[order] = factorial(order)
    return np.linalg.solve(vander, rhs)


def _derivative(fn, s: float, order: int, m: int, rel_tol: float) -> Tuple[float, float]:
    """Richardson-extrapolated derivative and the gap between the two step sizes."""
    half = m + 1
    weights = _stencil(order, half)
    offsets = np.arange(-half, half + 1, dtype=np.float64)
    q = 2 * half + 2 - order if order % 2 == 0 else 2 * half + 1 - order

    def at_step(h: float) -> float:
        return float(np.dot(weights, [fn(s + o * h) for o in offsets]) / h ** order)

    h = s * rel_tol ** (1.0 / (order + 2))
    coarse, fine = at_step(h), at_step(0.5 * h)
    return fine + (fine - coarse) / (2.0 ** q - 1.0), abs(fine - coarse)


def success_probability_nakagami(
    cfg: NetworkConfig, spec: Optional[QuadratureSpec] = None, m: Optional[int] = None
) -> float:
    """Σ_{k<m} (−s)^k/k! · 𝓛⁽ᵏ⁾(s) at s = T·m/(Ω·g(z)), Nakagami-m power fading."""
    spec = _spec(spec)
    fading = cfg.fading
    if m is None:
        if not isinstance(fading, NakagamiPower):
            raise ValueError("success_probability_nakagami needs Nakagami fading or an explicit m")
        m = fading.m
    omega = fading.omega if isinstance(fading, NakagamiPower) else fading.mean
    if not 1 <= int(m) <= MAX_NAKAGAMI_M or int(m) != m:
        raise ValueError(f"Nakagami m must be an integer in 1..{MAX_NAKAGAMI_M}, got {m}")
    if cfg.noise != 0:
        raise ValueError(f"success_probability_nakagami assumes W = 0, got noise={cfg.noise}")
    m = int(m)
    cfg = cfg.with_updates(fading=NakagamiPower(m, omega))
    s = cfg.threshold * m / (omega * cfg.link_gain)
    tight = spec.tightened(100.0)

    def laplace(x: float) -> float:
        return conditional_laplace_interference(cfg, x, tight)

    value = laplace(s)
    total = value
    for k in range(1, m):
        deriv, gap = _derivative(laplace, s, k, m, spec.rel_tol)
        scale = s ** k / factorial(k)
        term = (-1) ** k * scale * deriv
        if gap * scale > 10.0 * spec.rel_tol * max(abs(term), value):
            raise DerivativeInstabilityError(
                "success_probability_nakagami",
                (scale * deriv - scale * gap, scale * deriv),
                10.0 * spec.rel_tol,
                f"derivative order {k} at s={s:.6g}",
            )
        total += term
    return float(np.clip(total, 0.0, 1.0))


@dataclass(frozen=True)
class SuccessBounds:
    lower: float
    upper: float
    tight_upper: float


def success_bounds(cfg: NetworkConfig, spec: Optional[QuadratureSpec] = None) -> SuccessBounds:
    """Closed-form bounds built from the Poisson reference P_p.

    lower       = P_p(λ)·P_p(c̄·f̂*)
    upper       = P_p(λ/(1 + c̄β̂))
    tight_upper = P_p(λ(1 − e^{−c̄β̂})/(c̄β̂))·[1 − (1 − e^{−c̄β̂})κ/β̂]

    With λ_p = 0 and c̄ > 0 only the typical cluster interferes: upper is 1,
    lower is P_p(c̄·f̂*) and tight_upper keeps its own-cluster factor.
    """
    require_rayleigh(cfg, "success_bounds", noise_free=True)
    lam = cfg.cluster.intensity
    cbar = cfg.cluster.mean_cluster_size

    def pp(x: float) -> float:
        return poisson_success(cfg.pathloss, cfg.threshold, cfg.link_distance, x, spec)

    if lam == 0 and cbar == 0:
        return SuccessBounds(1.0, 1.0, 1.0)
    summ = beta_summary(cfg, spec)
    x = cbar * summ.beta_hat
    hit = -np.expm1(-x)
    ratio = hit / x if x > 0 else 1.0
    lower = pp(lam) * pp(cbar * summ.f_hat_star)
    upper = pp(lam / (1.0 + x))
    own = 1.0 - hit * summ.kappa / summ.beta_hat if summ.beta_hat > 0 else 1.0
    tight = pp(lam * ratio) * own
    return SuccessBounds(float(lower), float(upper), float(tight))

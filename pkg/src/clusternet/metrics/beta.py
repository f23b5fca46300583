"""The per-cluster outage kernel β and the Poisson reference.

With t(u) = T·g(u)/g(R) the outage weight of one interferer at offset u from
the receiver is k(u) = t/(1+t). Averaging k over the daughters of a parent
gives

    β(R, y) = ∫ k(x − y − z) f(x) dx = B(‖y + z‖),

so β is carried by the radial profile B(d) = (k∗f)(d), computed once per
configuration by `BetaProfile`.
"""

from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from ..channel.fading import RayleighPower
from ..channel.pathloss import BOUNDED, SINGULAR, PathLoss, c_alpha
from ..errors import UnsupportedOperationError
from ..montecarlo.config import NetworkConfig
from ..pgfl.functional import profile_features, truncation_radius
from ..pgfl.kernels import Kernel, outage_kernel
from ..pgfl.quadrature import QuadratureSpec, integrate_radial, ring_average

log = logging.getLogger("clusternet.metrics")


def _spec(spec: Optional[QuadratureSpec]) -> QuadratureSpec:
    return spec if spec is not None else QuadratureSpec()


def require_rayleigh(
    cfg: NetworkConfig, operation: str, *, noise_free: bool = False
) -> RayleighPower:
    if not isinstance(cfg.fading, RayleighPower):
        raise UnsupportedOperationError(
            f"{operation} needs Rayleigh fading, got {cfg.fading.kind}; use Monte Carlo instead"
        )
    if noise_free and cfg.noise != 0:
        raise ValueError(f"{operation} assumes W = 0, got noise={cfg.noise}")
    return cfg.fading


@dataclass(frozen=True)
class BetaProfile:
    cfg: NetworkConfig
    spec: QuadratureSpec
    kernel: Kernel

    @classmethod
    def build(cls, cfg: NetworkConfig, spec: Optional[QuadratureSpec] = None) -> "BetaProfile":
        kernel = outage_kernel(cfg.pathloss, cfg.threshold, cfg.link_distance)
        return cls(cfg, _spec(spec), kernel)

    @property
    def scattering(self):
        return self.cfg.cluster.scattering

    @property
    def features(self) -> Tuple[float, ...]:
        return profile_features(self.kernel, self.scattering)

    def __call__(self, d):
        """B(d) for d ≥ 0."""
        return ring_average(
            self.kernel.radial_complement,
            d,
            self.scattering,
            self.spec.inner(),
            features=self.kernel.features,
            name="beta",
        )

    def at(self, y):
        """β(R, y) for a point (or array of points) y."""
        y = np.asarray(y, dtype=np.float64)
        return self(np.hypot(y[..., 0] + self.cfg.link_distance, y[..., 1]))

    def r_out(self, weight: float = 1.0) -> float:
        return truncation_radius(self.kernel, self.spec, reach=self.scattering.reach, weight=weight)

    def integral(self, fn=None, *, weight: float = 1.0, name: str = "beta_integral") -> float:
        """∫ fn(β(R, y)) dy (fn = identity by default)."""
        fn = fn if fn is not None else (lambda b: b)
        res = integrate_radial(
            lambda d: fn(self(d)),
            self.spec,
            r_out=self.r_out(weight),
            features=self.features,
            name=name,
        )
        return res.value

    def average(self, fn=None, *, name: str = "beta_average") -> float:
        """∫ fn(β(R, y)) f(y) dy."""
        fn = fn if fn is not None else (lambda b: b)
        return float(
            ring_average(
                lambda rho: fn(self(rho)),
                self.cfg.link_distance,
                self.scattering,
                self.spec,
                features=self.features,
                name=name,
            )
        )


def beta(cfg: NetworkConfig, y: Sequence[float], spec: Optional[QuadratureSpec] = None) -> float:
    """β(R, y) ∈ [0, 1]."""
    return float(np.clip(BetaProfile.build(cfg, spec).at(y), 0.0, 1.0))


def beta_fixed(
    cfg: NetworkConfig, y: Sequence[float], spec: Optional[QuadratureSpec] = None
) -> float:
    """β̃(R, y) = ∫ f(x) / (1 + T·g(x − y − z)/g(R)) dx."""
    spec = _spec(spec)
    kernel = outage_kernel(cfg.pathloss, cfg.threshold, cfg.link_distance)
    y = np.asarray(y, dtype=np.float64)
    d = float(np.hypot(y[0] + cfg.link_distance, y[1]))
    s = cfg.threshold / cfg.link_gain

    def passing(rho):
        t = s * cfg.pathloss.radial(rho)
        return np.where(np.isfinite(t), 1.0 / (1.0 + np.where(np.isfinite(t), t, 0.0)), 0.0)

    value = ring_average(
        passing,
        d,
        cfg.cluster.scattering,
        spec.inner(),
        features=kernel.features,
        name="beta_fixed",
    )
    return float(np.clip(value, 0.0, 1.0))


@dataclass(frozen=True)
class BetaSummary:
    beta_I: float
    beta_hat: float
    kappa: float
    f_hat_star: float
    r_out: float
    argmax: float  # ‖y + z‖ at the maximum

    def holder_bound(self, f_hat: float) -> float:
        return min(1.0, f_hat * self.beta_I)


def _maximize(profile: BetaProfile, cfg: NetworkConfig) -> Tuple[float, float]:
    """sup_d B(d) by a grid over [0, R + 3·reach] refined with a bounded search."""
    hi = cfg.link_distance + 3.0 * cfg.cluster.reach
    grid = np.unique(np.concatenate((np.linspace(0.0, hi, 64), [cfg.link_distance])))
    vals = np.asarray(profile(grid))
    i = int(np.argmax(vals))
    lo_b, hi_b = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    best_d, best = float(grid[i]), float(vals[i])
    if hi_b > lo_b:
        res = optimize.minimize_scalar(
            lambda d: -float(profile(d)), bounds=(lo_b, hi_b), method="bounded",
            options={"xatol": 1e-6 * max(hi, 1.0)},
        )
        if res.success and -res.fun > best:
            best_d, best = float(res.x), float(-res.fun)
    return best, best_d


def beta_summary(cfg: NetworkConfig, spec: Optional[QuadratureSpec] = None) -> BetaSummary:
    """β_I = ∫β dy, β̂ = sup β, κ = ∫β f, and f̂* = sup f∗f."""
    profile = BetaProfile.build(cfg, spec)
    beta_i = profile.integral(name="beta_I")
    beta_hat, argmax = _maximize(profile, cfg)
    kappa = profile.average(name="kappa")
    summary = BetaSummary(
        beta_I=beta_i,
        beta_hat=min(beta_hat, 1.0),
        kappa=kappa,
        f_hat_star=cfg.cluster.scattering.sup_selfconv,
        r_out=profile.r_out(),
        argmax=argmax,
    )
    log.debug(f"beta summary {summary}")
    return summary


def beta_square_integral(cfg: NetworkConfig, spec: Optional[QuadratureSpec] = None) -> float:
    """∫ β(R, y)² dy."""
    return BetaProfile.build(cfg, spec).integral(lambda b: b * b, name="beta_square")


def poisson_beta_integral(
    pathloss: PathLoss,
    threshold: float,
    link_distance: float,
    spec: Optional[QuadratureSpec] = None,
    *,
    closed_form: bool = True,
) -> float:
    """β_I = ∫ k(x) dx, which does not depend on the scattering law."""
    a, T = pathloss.alpha, float(threshold)
    if closed_form and pathloss.kind == SINGULAR:
        return float(link_distance ** 2 * T ** (2.0 / a) * c_alpha(a))
    gr = float(pathloss.radial(link_distance))
    if closed_form and pathloss.kind == BOUNDED:
        return float(T * c_alpha(a) * (T + gr) ** (2.0 / a - 1.0) * gr ** (-2.0 / a))
    spec = _spec(spec)
    kernel = outage_kernel(pathloss, T, link_distance)
    res = integrate_radial(
        kernel.radial_complement,
        spec,
        r_out=truncation_radius(kernel, spec, reach=0.0),
        features=kernel.features,
        name="poisson_beta_integral",
    )
    return res.value


def poisson_success(
    pathloss: PathLoss,
    threshold: float,
    link_distance: float,
    intensity: float,
    spec: Optional[QuadratureSpec] = None,
    *,
    closed_form: bool = True,
) -> float:
    """P_p(λ) = exp(−λ·β_I): success probability when the transmitters form a PPP."""
    if intensity < 0:
        raise ValueError(f"intensity must be >= 0, got {intensity}")
    if intensity == 0:
        return 1.0
    b = poisson_beta_integral(pathloss, threshold, link_distance, spec, closed_form=closed_form)
    return float(np.exp(-intensity * b))

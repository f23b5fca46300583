"""Power-fading laws.

Conventions:
- RayleighPower(mu): h ~ Exponential with *rate* mu, 𝓛_h(s) = mu/(mu+s), E[h] = 1/mu.
- NakagamiPower(m, omega): h ~ Gamma(shape m, scale omega/m), E[h] = omega, m integer.
- GeneralizedPareto(k, sigma, theta): shape k, scale sigma, location theta;
  no closed Laplace transform, so it only feeds Monte Carlo and CDF-based bounds.

`scale` is E[h] for Rayleigh and Nakagami and θ + σ for Pareto.
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np
from scipy import integrate, special, stats

from ..errors import DivergentMomentError, UnsupportedOperationError


@dataclass(frozen=True)
class RayleighPower:
    mu: float = 1.0
    kind: ClassVar[str] = "rayleigh"
    has_laplace: ClassVar[bool] = True

    def __post_init__(self) -> None:
        if not self.mu > 0:
            raise ValueError(f"Rayleigh rate mu must be > 0, got {self.mu}")

    @property
    def mean(self) -> float:
        return 1.0 / self.mu

    @property
    def scale(self) -> float:
        return 1.0 / self.mu

    def cdf(self, y) -> np.ndarray:
        y = np.maximum(np.asarray(y, dtype=np.float64), 0.0)
        return -np.expm1(-self.mu * y)

    def sf(self, y) -> np.ndarray:
        y = np.maximum(np.asarray(y, dtype=np.float64), 0.0)
        return np.exp(-self.mu * y)

    def laplace(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=np.float64)
        return self.mu / (self.mu + s)

    def laplace_complement(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=np.float64)
        return s / (self.mu + s)

    def fractional_moment(self, p: float) -> float:
        if p <= -1:
            raise DivergentMomentError(f"E[h^{p}] diverges for exponential power fading")
        return float(self.mu ** (-p) * special.gamma(1.0 + p))

    def partial_mean(self, t) -> np.ndarray:
        """∫_0^t ν dF_h(ν)."""
        t = np.maximum(np.asarray(t, dtype=np.float64), 0.0)
        return special.gammainc(2.0, self.mu * t) / self.mu

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.exponential(1.0 / self.mu, size=size)


@dataclass(frozen=True)
class NakagamiPower:
    m: int = 1
    omega: float = 1.0
    kind: ClassVar[str] = "nakagami"
    has_laplace: ClassVar[bool] = True

    def __post_init__(self) -> None:
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"Nakagami m must be a positive integer, got {self.m}")
        if not self.omega > 0:
            raise ValueError(f"Nakagami omega must be > 0, got {self.omega}")

    @property
    def mean(self) -> float:
        return float(self.omega)

    @property
    def scale(self) -> float:
        return float(self.omega)

    def cdf(self, y) -> np.ndarray:
        y = np.maximum(np.asarray(y, dtype=np.float64), 0.0)
        return special.gammainc(self.m, self.m * y / self.omega)

    def sf(self, y) -> np.ndarray:
        y = np.maximum(np.asarray(y, dtype=np.float64), 0.0)
        return special.gammaincc(self.m, self.m * y / self.omega)

    def laplace(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=np.float64)
        return (1.0 + self.omega * s / self.m) ** (-self.m)

    def laplace_complement(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=np.float64)
        return -np.expm1(-self.m * np.log1p(self.omega * s / self.m))

    def fractional_moment(self, p: float) -> float:
        if p <= -self.m:
            raise DivergentMomentError(f"E[h^{p}] diverges for Nakagami m={self.m}")
        scale = self.omega / self.m
        return float(scale ** p * np.exp(special.gammaln(self.m + p) - special.gammaln(self.m)))

    def partial_mean(self, t) -> np.ndarray:
        t = np.maximum(np.asarray(t, dtype=np.float64), 0.0)
        return self.omega * special.gammainc(self.m + 1, self.m * t / self.omega)

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.gamma(self.m, self.omega / self.m, size=size)


@dataclass(frozen=True)
class GeneralizedPareto:
    k: float = 1.0
    sigma: float = 1.0
    theta: float = 0.0
    kind: ClassVar[str] = "pareto"
    has_laplace: ClassVar[bool] = False

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise ValueError(f"Pareto scale sigma must be > 0, got {self.sigma}")
        if self.k < 0:
            raise ValueError(f"Pareto shape k must be >= 0 for a power-fading law, got {self.k}")
        if self.theta < 0:
            raise ValueError(f"Pareto location theta must be >= 0, got {self.theta}")

    @property
    def dist(self):
        return stats.genpareto(c=self.k, loc=self.theta, scale=self.sigma)

    @property
    def mean(self) -> float:
        if self.k >= 1:
            return float("inf")
        return self.theta + self.sigma / (1.0 - self.k)

    @property
    def scale(self) -> float:
        """Size of a typical draw, finite even where the mean is not."""
        return float(self.theta + self.sigma)

    def cdf(self, y) -> np.ndarray:
        return self.dist.cdf(np.maximum(np.asarray(y, dtype=np.float64), 0.0))

    def sf(self, y) -> np.ndarray:
        return self.dist.sf(np.maximum(np.asarray(y, dtype=np.float64), 0.0))

    def laplace(self, s) -> np.ndarray:
        raise UnsupportedOperationError(
            "generalized Pareto fading has no closed-form Laplace transform; "
            "use Monte Carlo or the CDF-based interference bounds"
        )

    laplace_complement = laplace

    def fractional_moment(self, p: float) -> float:
        if self.k > 0 and p >= 1.0 / self.k:
            raise DivergentMomentError(
                f"E[h^{p}] diverges for generalized Pareto with tail index 1/k={1.0 / self.k:g}"
            )
        if p <= -1 and self.theta == 0:
            raise DivergentMomentError(f"E[h^{p}] diverges at the origin for theta=0")
        dist = self.dist
        value, _ = integrate.quad(lambda v: v ** p * dist.pdf(v), self.theta, np.inf, limit=200)
        return float(value)

    def partial_mean(self, t) -> np.ndarray:
        """∫_θ^t ν dF_h(ν), closed form through integration by parts."""
        t = np.asarray(t, dtype=np.float64)
        u = np.maximum(t - self.theta, 0.0)
        s, k = self.sigma, self.k
        if k == 0:
            surv = np.exp(-u / s)
            area = s * (-np.expm1(-u / s))
        else:
            base = 1.0 + k * u / s
            surv = base ** (-1.0 / k)
            if k == 1.0:
                area = s * np.log1p(u / s)
            else:
                area = s / (1.0 - k) * (1.0 - base ** (1.0 - 1.0 / k))
        excess = area - u * surv
        return self.theta * (1.0 - surv) + excess

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        return self.dist.rvs(size=size, random_state=rng)


FadingModel = Union[RayleighPower, NakagamiPower, GeneralizedPareto]


def fading_cdf(fm: FadingModel, y):
    v = fm.cdf(y)
    return float(v) if np.ndim(v) == 0 else v


def fading_laplace(fm: FadingModel, s):
    v = fm.laplace(s)
    return float(v) if np.ndim(v) == 0 else v


def fading_fractional_moment(fm: FadingModel, p: float) -> float:
    return fm.fractional_moment(p)

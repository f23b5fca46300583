"""Cluster-process data model.

A Neyman-Scott process is described by:
- parent intensity λ_p (Poisson parents, never part of the pattern)
- mean cluster size c̄
- a scattering law (daughter displacement density f, isotropic)
- a count law (how many daughters each parent gets)

Count laws are strategies: the generating-functional code only needs
`void_complement`, `palm_pgf` and `factorial_moment2`, so adding a new law
means adding one class here.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import ClassVar, Optional, Tuple, Union

import numpy as np
from scipy import special

Point = Tuple[float, float]


def _norm2(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return x[..., 0] ** 2 + x[..., 1] ** 2


@dataclass(frozen=True)
class MaternBall:
    """Daughters uniform in the disc of radius `radius` around the parent."""

    radius: float
    kind: ClassVar[str] = "matern"

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError(f"MaternBall radius must be > 0, got {self.radius}")

    @property
    def reach(self) -> float:
        return float(self.radius)

    @property
    def scale(self) -> float:
        return float(self.radius)

    def radial_density(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=np.float64)
        a = self.radius
        return np.where(r <= a, 1.0 / (np.pi * a * a), 0.0)

    def density(self, x) -> np.ndarray:
        return self.radial_density(np.sqrt(_norm2(x)))

    def selfconv(self, d) -> np.ndarray:
        """(f∗f) at distance d: normalized lens area of two discs."""
        d = np.asarray(d, dtype=np.float64)
        a = self.radius
        dc = np.clip(d, 0.0, 2.0 * a)
        lens = 2.0 * a * a * np.arccos(dc / (2.0 * a)) - 0.5 * dc * np.sqrt(
            np.maximum(4.0 * a * a - dc * dc, 0.0)
        )
        return np.where(d < 2.0 * a, lens / (np.pi * a * a) ** 2, 0.0)

    @property
    def sup_density(self) -> float:
        return 1.0 / (np.pi * self.radius ** 2)

    @property
    def sup_selfconv(self) -> float:
        return 1.0 / (np.pi * self.radius ** 2)

    def breakpoints(self) -> Tuple[float, ...]:
        a = self.radius
        return (0.5 * a, a)

    def ring(self, rho, p) -> np.ndarray:
        """∫ f(u - p·e₁) dθ over the circle ‖u‖ = rho."""
        rho = np.asarray(rho, dtype=np.float64)
        p = np.asarray(p, dtype=np.float64)
        a = self.radius
        with np.errstate(divide="ignore", invalid="ignore"):
            c = (rho * rho + p * p - a * a) / (2.0 * rho * p)
        arc = 2.0 * np.arccos(np.clip(np.nan_to_num(c, nan=1.0), -1.0, 1.0))
        inside = rho + p <= a
        outside = (rho >= p + a) | (rho <= p - a)
        arc = np.where(inside, 2.0 * np.pi, np.where(outside, 0.0, arc))
        return arc / (np.pi * a * a)

    def ring_edges(self, p) -> np.ndarray:
        """Radii where `ring(·, p)` is not smooth, one column per edge."""
        p = np.asarray(p, dtype=np.float64)
        return np.abs(p - self.radius)[:, None]

    def sample_offsets(self, rng: np.random.Generator, n: int) -> np.ndarray:
        u = rng.random((int(n), 2))
        r = self.radius * np.sqrt(u[:, 0])
        th = 2.0 * np.pi * u[:, 1]
        return np.column_stack((r * np.cos(th), r * np.sin(th)))


@dataclass(frozen=True)
class ThomasGaussian:
    """Daughters displaced by an isotropic normal with std `sigma` per axis."""

    sigma: float
    kind: ClassVar[str] = "thomas"
    reach_sigmas: ClassVar[float] = 6.0

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise ValueError(f"ThomasGaussian sigma must be > 0, got {self.sigma}")

    @property
    def reach(self) -> float:
        return self.reach_sigmas * float(self.sigma)

    @property
    def scale(self) -> float:
        return float(self.sigma)

    def radial_density(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=np.float64)
        s2 = self.sigma ** 2
        return np.exp(-r * r / (2.0 * s2)) / (2.0 * np.pi * s2)

    def density(self, x) -> np.ndarray:
        return self.radial_density(np.sqrt(_norm2(x)))

    def selfconv(self, d) -> np.ndarray:
        d = np.asarray(d, dtype=np.float64)
        s2 = self.sigma ** 2
        return np.exp(-d * d / (4.0 * s2)) / (4.0 * np.pi * s2)

    @property
    def sup_density(self) -> float:
        return 1.0 / (2.0 * np.pi * self.sigma ** 2)

    @property
    def sup_selfconv(self) -> float:
        return 1.0 / (4.0 * np.pi * self.sigma ** 2)

    def breakpoints(self) -> Tuple[float, ...]:
        return tuple(float(k) * self.sigma for k in range(1, int(self.reach_sigmas) + 1))

    def ring(self, rho, p) -> np.ndarray:
        rho = np.asarray(rho, dtype=np.float64)
        p = np.asarray(p, dtype=np.float64)
        s2 = self.sigma ** 2
        return np.exp(-((rho - p) ** 2) / (2.0 * s2)) * special.i0e(rho * p / s2) / s2

    def ring_edges(self, p) -> np.ndarray:
        # the ring density is smooth; the edges only keep panels about one sigma wide
        p = np.asarray(p, dtype=np.float64)
        k = np.arange(-5, 6, dtype=np.float64)
        return p[:, None] + k[None, :] * self.sigma

    def sample_offsets(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.normal(0.0, self.sigma, size=(int(n), 2))


Scattering = Union[MaternBall, ThomasGaussian]


@dataclass(frozen=True)
class PoissonCount:
    """Poisson(c̄) daughters per parent; M(z) = exp(-c̄(1-z))."""

    kind: ClassVar[str] = "poisson"

    def pgf(self, z, mean: float) -> np.ndarray:
        return np.exp(-mean * (1.0 - np.asarray(z, dtype=np.float64)))

    def void_complement(self, q, mean: float) -> np.ndarray:
        """1 - M(1 - q), stable for tiny q."""
        return -np.expm1(-mean * np.asarray(q, dtype=np.float64))

    def palm_pgf(self, q, mean: float) -> np.ndarray:
        """Generating function of the reduced Palm cluster at 1 - q."""
        return np.exp(-mean * np.asarray(q, dtype=np.float64))

    def factorial_moment2(self, mean: float) -> float:
        return float(mean) ** 2

    def sample(self, rng: np.random.Generator, mean: float, size: int) -> np.ndarray:
        return rng.poisson(mean, size=int(size))

    def palm_count(self, rng: np.random.Generator, mean: float) -> int:
        return int(rng.poisson(mean))


@dataclass(frozen=True)
class FixedCount:
    """Exactly n daughters per parent; M(z) = z^n."""

    n: int
    kind: ClassVar[str] = "fixed"

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"FixedCount n must be an integer >= 1, got {self.n}")

    def pgf(self, z, mean: float) -> np.ndarray:
        return np.asarray(z, dtype=np.float64) ** self.n

    def void_complement(self, q, mean: float) -> np.ndarray:
        q = np.clip(np.asarray(q, dtype=np.float64), 0.0, 1.0)
        with np.errstate(divide="ignore"):
            return -np.expm1(self.n * np.log1p(-q))

    def palm_pgf(self, q, mean: float) -> np.ndarray:
        q = np.clip(np.asarray(q, dtype=np.float64), 0.0, 1.0)
        return (1.0 - q) ** (self.n - 1)

    def factorial_moment2(self, mean: float) -> float:
        return float(self.n * (self.n - 1))

    def sample(self, rng: np.random.Generator, mean: float, size: int) -> np.ndarray:
        return np.full(int(size), self.n, dtype=np.int64)

    def palm_count(self, rng: np.random.Generator, mean: float) -> int:
        return self.n - 1


CountLaw = Union[PoissonCount, FixedCount]


@dataclass(frozen=True)
class ClusterModel:
    parent_intensity: float
    mean_cluster_size: float
    scattering: Scattering
    count_law: CountLaw = field(default_factory=PoissonCount)

    def __post_init__(self) -> None:
        if self.parent_intensity < 0:
            raise ValueError(f"parent_intensity must be >= 0, got {self.parent_intensity}")
        if self.mean_cluster_size < 0:
            raise ValueError(f"mean_cluster_size must be >= 0, got {self.mean_cluster_size}")
        if isinstance(self.count_law, FixedCount) and self.mean_cluster_size != self.count_law.n:
            raise ValueError(
                f"FixedCount({self.count_law.n}) requires mean_cluster_size == {self.count_law.n}, "
                f"got {self.mean_cluster_size}"
            )

    @classmethod
    def fixed(cls, parent_intensity: float, n: int, scattering: Scattering) -> "ClusterModel":
        return cls(parent_intensity, float(n), scattering, FixedCount(int(n)))

    @property
    def intensity(self) -> float:
        """Total intensity λ = λ_p c̄."""
        return float(self.parent_intensity) * float(self.mean_cluster_size)

    @property
    def reach(self) -> float:
        return self.scattering.reach

    def with_updates(self, **changes) -> "ClusterModel":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True)
class Window:
    """Disc in which a sampled pattern is complete."""

    center: Point = (0.0, 0.0)
    radius: float = 1.0

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError(f"Window radius must be > 0, got {self.radius}")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    @property
    def area(self) -> float:
        return float(np.pi * self.radius ** 2)

    def contains(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        c = np.asarray(self.center)
        return _norm2(p - c) <= self.radius ** 2

    def dilated(self, margin: float) -> "Window":
        return Window(self.center, self.radius + float(margin))


@dataclass
class PointPattern:
    """Finite planar pattern, complete inside `window`.

    With `origin_conditioned` the pattern is a reduced Palm sample: the
    conditioning point at the origin is not part of `points`.
    `parent_index` and `cluster_sizes` are per-cluster bookkeeping (None for PPP samples).
    """

    points: np.ndarray
    window: Window
    origin_conditioned: bool = False
    parent_index: Optional[np.ndarray] = None
    cluster_sizes: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        self.points = np.asarray(self.points, dtype=np.float64).reshape(-1, 2)

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def count_within(self, radius: float, center: Point = (0.0, 0.0)) -> int:
        return int(np.count_nonzero(_norm2(self.points - np.asarray(center)) <= radius * radius))

    def to_frame(self):
        import pandas as pd

        return pd.DataFrame({"x": self.points[:, 0], "y": self.points[:, 1]})

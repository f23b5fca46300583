"""Kernels: the argument v of a generating functional.

A kernel is stored through its complement 1 - v, the quantity every
integral actually sees. Isotropic kernels carry the complement as a function
of the distance to `center`; the others as a function of 2-D points.

Each factory also records
- `features`: radii where the complement changes fast or has a kink
- `tail(R)`: an upper bound on ∫_{‖x−center‖>R} (1 − v(x)) dx, used to pick
  the outer truncation radius
"""

from __future__ import annotations
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from ..channel.fading import FadingModel, RayleighPower
from ..channel.pathloss import CLIPPED, PathLoss
from ..geometry.streams import as_generator

RadialFn = Callable[[np.ndarray], np.ndarray]
PlaneFn = Callable[[np.ndarray], np.ndarray]
TailFn = Callable[[float], float]

_SCALES = (0.25, 0.5, 1.0, 2.0, 4.0)


@dataclass(frozen=True)
class Kernel:
    name: str
    radial_complement: Optional[RadialFn] = None
    plane_complement: Optional[PlaneFn] = None
    center: Tuple[float, float] = (0.0, 0.0)
    features: Tuple[float, ...] = ()
    tail: Optional[TailFn] = None
    constant: Optional[float] = None

    def __post_init__(self) -> None:
        if self.radial_complement is None and self.plane_complement is None:
            raise ValueError(f"kernel {self.name!r} needs a radial or a plane complement")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    @property
    def isotropic(self) -> bool:
        return self.radial_complement is not None

    def complement(self, x) -> np.ndarray:
        """1 − v(x) for points of shape (..., 2)."""
        x = np.asarray(x, dtype=np.float64)
        if self.radial_complement is not None:
            d = np.hypot(x[..., 0] - self.center[0], x[..., 1] - self.center[1])
            return np.asarray(self.radial_complement(d), dtype=np.float64)
        return np.asarray(self.plane_complement(x), dtype=np.float64)

    def __call__(self, x) -> np.ndarray:
        v = 1.0 - self.complement(x)
        return float(v) if np.ndim(v) == 0 else v

    def generic(self) -> "Kernel":
        """Same kernel, forced through the non-isotropic code path."""
        return replace(self, radial_complement=None, plane_complement=self.complement)

    def assert_range(self, radius: Optional[float] = None, n: int = 256, seed: int = 0) -> None:
        """Sample v on B(center, radius) and check it stays within [0, 1]."""
        if radius is None:
            radius = 4.0 * max(self.features) if self.features else 1.0
        rng = as_generator(seed)
        u = rng.random((n, 2))
        r = radius * np.sqrt(u[:, 0])
        th = 2.0 * np.pi * u[:, 1]
        pts = np.column_stack((r * np.cos(th), r * np.sin(th))) + np.asarray(self.center)
        v = 1.0 - self.complement(pts)
        bad = ~((v >= -1e-12) & (v <= 1.0 + 1e-12))
        if np.any(bad):
            i = int(np.argmax(bad))
            raise ValueError(
                f"kernel {self.name!r} leaves [0, 1]: v={v[i]:.6g} "
                f"at ({pts[i, 0]:.6g}, {pts[i, 1]:.6g})"
            )


def constant_kernel(value: float) -> Kernel:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"constant kernel value must lie in [0, 1], got {value}")
    c = 1.0 - float(value)
    return Kernel(
        name=f"constant({value:g})",
        radial_complement=lambda d: np.full(np.shape(d), c),
        tail=(lambda R: 0.0) if c == 0.0 else None,
        constant=float(value),
    )


def indicator_outside_ball(radius: float, center: Sequence[float] = (0.0, 0.0)) -> Kernel:
    """v = 1 outside B(center, radius), 0 inside."""
    r = float(radius)
    if not r > 0:
        raise ValueError(f"ball radius must be > 0, got {radius}")
    return Kernel(
        name=f"outside_ball({r:g})",
        radial_complement=lambda d: (np.asarray(d) <= r).astype(np.float64),
        center=tuple(center),
        features=(r,),
        tail=lambda R: float(np.pi * max(r * r - R * R, 0.0)),
    )


def half_plane_indicator(normal: Sequence[float] = (1.0, 0.0), offset: float = 0.0) -> Kernel:
    """v = 1 on {x : ⟨x, normal⟩ > offset}."""
    n = np.asarray(normal, dtype=np.float64)
    n = n / np.hypot(n[0], n[1])

    def complement(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return (x[..., 0] * n[0] + x[..., 1] * n[1] <= offset).astype(np.float64)

    return Kernel(name="half_plane", plane_complement=complement)


def _features(pathloss: PathLoss, scale: float) -> Tuple[float, ...]:
    rho0 = scale ** (1.0 / pathloss.alpha)
    feats = [rho0 * k for k in _SCALES]
    if pathloss.kind == CLIPPED:
        feats.append(1.0)
    return tuple(feats)


def laplace_kernel(
    fading: FadingModel, pathloss: PathLoss, s: float, center: Sequence[float] = (0.0, 0.0)
) -> Kernel:
    """v(x) = 𝓛_h(s·g(x − center))."""
    s = float(s)
    if s < 0:
        raise ValueError(f"Laplace argument must be >= 0, got {s}")
    if s == 0:
        return replace(constant_kernel(1.0), center=tuple(center))
    fading.laplace(0.0)  # raises for laws without a transform

    def complement(d: np.ndarray) -> np.ndarray:
        x = s * pathloss.radial(d)
        finite = np.isfinite(x)
        return np.where(finite, fading.laplace_complement(np.where(finite, x, 0.0)), 1.0)

    scale = s * fading.mean
    return Kernel(
        name=f"laplace({fading.kind}, s={s:g})",
        radial_complement=complement,
        center=tuple(center),
        features=_features(pathloss, scale),
        tail=lambda R: scale * pathloss.tail_bound(R),
    )


def outage_kernel(
    pathloss: PathLoss, threshold: float, link_distance: float, center: Sequence[float] = (0.0, 0.0)
) -> Kernel:
    """1 − v = t/(1+t) with t = T·g(x − center)/g(R): the per-interferer outage weight."""
    s = float(threshold) / float(pathloss.radial(link_distance))
    k = laplace_kernel(RayleighPower(1.0), pathloss, s, center)
    return replace(k, name=f"outage(T={threshold:g}, R={link_distance:g})")


def _markov_exponent(fading: FadingModel, alpha: float) -> Optional[float]:
    if np.isfinite(fading.mean):
        return 1.0
    upper = min(1.0, 1.0 / fading.k)
    if upper <= 2.0 / alpha:
        return None
    return 0.5 * (2.0 / alpha + upper)


def cdf_kernel(
    fading: FadingModel, pathloss: PathLoss, y: float, center: Sequence[float] = (0.0, 0.0)
) -> Kernel:
    """v(x) = F_h(y / g(x − center)); v ≡ 0 for y ≤ 0."""
    y = float(y)
    if y <= 0:
        return replace(constant_kernel(0.0), center=tuple(center))

    def complement(d: np.ndarray) -> np.ndarray:
        return np.asarray(fading.sf(y / pathloss.radial(d)), dtype=np.float64)

    a = pathloss.alpha
    p = _markov_exponent(fading, a)
    tail = None
    if p is not None:
        moment = fading.mean if p == 1.0 else fading.fractional_moment(p)
        tail = lambda R: float(  # noqa: E731
            moment * y ** (-p) * 2.0 * np.pi * max(R, 1e-300) ** (2.0 - p * a) / (p * a - 2.0)
        )
    scale = fading.mean if np.isfinite(fading.mean) else fading.theta + fading.sigma
    return Kernel(
        name=f"cdf({fading.kind}, y={y:g})",
        radial_complement=complement,
        center=tuple(center),
        features=_features(pathloss, scale / y),
        tail=tail,
    )

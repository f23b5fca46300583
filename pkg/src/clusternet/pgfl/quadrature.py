"""Adaptive quadrature engine.

Three rules cover every integral clusternet needs:

- `integrate_radial`: 2π∫ r h(r) dr for isotropic integrands, Gauss-Legendre
  on geometric panels merged with the caller's feature radii.
- `ring_average`: E[h(‖u + Y‖)] for Y ~ f and ‖u‖ = p, reduced to one radial
  integral against the ring density of the scattering law.
- `integrate_plane` / `density_average`: polar tensor rules (Gauss-Legendre in
  radius, half-step trapezoid in angle) for integrands that are not isotropic.

Every rule refines by doubling the nodes per panel and stops once two
successive estimates agree within max(rel_tol·|value|, abs_tol). Failing that
after `max_subdivisions` doublings it raises `QuadratureError` with the last two
estimates.
"""

from __future__ import annotations
import logging
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from ..errors import QuadratureError
from ..geometry.models import Scattering

log = logging.getLogger("clusternet.pgfl")

RadialFn = Callable[[np.ndarray], np.ndarray]
PlaneFn = Callable[[np.ndarray], np.ndarray]

# points evaluated together by the per-point rules
CHUNK = 512
# radial nodes per chunk of integrate_plane
PLANE_CHUNK = 256


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and truncation radii.

    `r_out` fixes the outer truncation radius (otherwise solved per call from the
    kernel's tail bound); `r_in` overrides the Thomas truncation of the daughter
    density (default 6σ; Matern integration always stops at the ball).
    """

    rel_tol: float = 1e-6
    abs_tol: float = 1e-10
    r_out: Optional[float] = None
    r_in: Optional[float] = None
    max_subdivisions: int = 6

    def __post_init__(self) -> None:
        if not self.rel_tol > 0 or not self.abs_tol > 0:
            raise ValueError(f"tolerances must be > 0, got rel={self.rel_tol} abs={self.abs_tol}")
        if self.max_subdivisions < 1:
            raise ValueError(f"max_subdivisions must be >= 1, got {self.max_subdivisions}")
        for name in ("r_out", "r_in"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be > 0, got {v}")

    def tolerance(self, value: float) -> float:
        return max(self.rel_tol * abs(value), self.abs_tol)

    def tightened(self, factor: float) -> "QuadratureSpec":
        return replace(self, rel_tol=self.rel_tol / factor, abs_tol=self.abs_tol / factor)

    def inner(self) -> "QuadratureSpec":
        """Budget for integrals nested inside another one."""
        return self.tightened(10.0)


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    r_out: float
    level: int
    nodes: int

    def __float__(self) -> float:
        return self.value


@lru_cache(maxsize=32)
def gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """n-point Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = special.roots_legendre(int(n))
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=32)
def _smoothed_unit_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on [0, 1] after the map t -> (1 - cos πt)/2.

    The map has zero slope at both ends, which flattens square-root edges
    such as the rim of a Matern disc.
    """
    u, w = gauss_legendre(n)
    t = 0.5 * (u + 1.0)
    s = 0.5 * (1.0 - np.cos(np.pi * t))
    ws = 0.25 * np.pi * np.sin(np.pi * t) * w
    s.setflags(write=False)
    ws.setflags(write=False)
    return s, ws


def _clean_features(features: Iterable[float]) -> np.ndarray:
    f = np.asarray([float(v) for v in features], dtype=np.float64)
    return np.unique(f[np.isfinite(f) & (f > 0)])


def radial_edges(features: Iterable[float], r_out: float) -> np.ndarray:
    """Panel edges on [0, r_out]: a doubling grid seeded below the smallest feature."""
    r_out = float(r_out)
    feats = _clean_features(features)
    feats = feats[feats < r_out]
    base = feats[0] if feats.size else min(1.0, r_out)
    start = base / 4.0
    grid = start * 2.0 ** np.arange(0, max(1, int(np.ceil(np.log2(r_out / start))) + 1))
    edges = np.concatenate(([0.0, r_out], feats, grid[grid < r_out]))
    return np.unique(edges)


def _panel_nodes(edges: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    s, ws = _smoothed_unit_rule(n)
    a, b = edges[:-1], edges[1:]
    width = (b - a)[:, None]
    r = a[:, None] + width * s[None, :]
    w = width * ws[None, :]
    return r.ravel(), w.ravel()


def _converged(last: np.ndarray, before: np.ndarray, spec: QuadratureSpec) -> np.ndarray:
    return np.abs(last - before) <= np.maximum(spec.rel_tol * np.abs(last), spec.abs_tol)


def integrate_radial(
    h: RadialFn,
    spec: QuadratureSpec,
    *,
    r_out: float,
    features: Sequence[float] = (),
    name: str = "integrate_radial",
) -> QuadResult:
    """2π∫_0^r_out r·h(r) dr for a vectorized radial profile h."""
    edges = radial_edges(features, r_out)
    estimates = []
    for level in range(spec.max_subdivisions + 1):
        r, w = _panel_nodes(edges, 4 * 2 ** level)
        vals = np.asarray(h(r), dtype=np.float64)
        est = float(2.0 * np.pi * np.sum(w * r * vals))
        estimates.append(est)
        if level and abs(est - estimates[-2]) <= spec.tolerance(est):
            return QuadResult(est, abs(est - estimates[-2]), float(r_out), level, r.size)
    log.warning(f"{name}: refinement exhausted at r_out={r_out:.6g}")
    raise QuadratureError(name, estimates, spec.tolerance(estimates[-1]), f"r_out={r_out:.6g}")


def integrate_plane(
    f: PlaneFn,
    spec: QuadratureSpec,
    *,
    center: Sequence[float] = (0.0, 0.0),
    features: Sequence[float] = (),
    r_out: Optional[float] = None,
    name: str = "integrate_plane",
) -> QuadResult:
    """∫ f(x) dx over the disc B(center, r_out); f takes points of shape (..., 2).

    Isotropy is not assumed: the angular rule is refined together with the
    radial one.
    """
    r_out = r_out if r_out is not None else spec.r_out
    if r_out is None:
        raise ValueError(f"{name}: an outer radius is required (argument or QuadratureSpec.r_out)")
    c = np.asarray(center, dtype=np.float64)
    edges = radial_edges(features, r_out)
    estimates = []
    for level in range(spec.max_subdivisions + 1):
        r, w = _panel_nodes(edges, 4 * 2 ** level)
        n_theta = 16 * 2 ** level
        theta = (np.arange(n_theta) + 0.5) * (2.0 * np.pi / n_theta)
        ring = np.column_stack((np.cos(theta), np.sin(theta)))
        total = 0.0
        for start in range(0, r.size, PLANE_CHUNK):
            rr = r[start : start + PLANE_CHUNK]
            pts = c + rr[:, None, None] * ring[None, :, :]
            vals = np.asarray(f(pts), dtype=np.float64)
            total += float(np.sum(w[start : start + PLANE_CHUNK] * rr * vals.sum(axis=1)))
        est = total * 2.0 * np.pi / n_theta
        estimates.append(est)
        if level and abs(est - estimates[-2]) <= spec.tolerance(est):
            return QuadResult(est, abs(est - estimates[-2]), float(r_out), level, r.size * n_theta)
    log.warning(f"{name}: refinement exhausted at r_out={r_out:.6g}")
    raise QuadratureError(name, estimates, spec.tolerance(estimates[-1]), f"r_out={r_out:.6g}")


def inner_reach(scattering: Scattering, spec: QuadratureSpec) -> float:
    if spec.r_in is None or scattering.kind == "matern":
        return scattering.reach
    return float(spec.r_in)


def _refine_per_point(
    rule: Callable[[np.ndarray, int], np.ndarray],
    m: int,
    spec: QuadratureSpec,
    name: str,
    where: Callable[[int], str],
) -> np.ndarray:
    """Run `rule(indices, level)` until every point has converged."""
    last = np.full(m, np.nan)
    before = np.full(m, np.nan)
    active = np.arange(m)
    for level in range(spec.max_subdivisions + 1):
        est = rule(active, level)
        before[active] = last[active]
        last[active] = est
        if level == 0:
            continue
        active = active[~_converged(last[active], before[active], spec)]
        if active.size == 0:
            return last
    gap = np.abs(last[active] - before[active])
    worst = int(active[int(np.argmax(gap))])
    log.warning(f"{name}: {active.size} of {m} points did not converge")
    raise QuadratureError(
        name, (before[worst], last[worst]), spec.tolerance(last[worst]), where(worst)
    )


def ring_average(
    h: RadialFn,
    p,
    scattering: Scattering,
    spec: QuadratureSpec,
    *,
    features: Sequence[float] = (),
    name: str = "ring_average",
):
    """E[h(‖u + Y‖)] with Y ~ f, for every offset length p = ‖u‖.

    `features` are radii (distances from the centre of h) where h is not smooth.
    Returns a float for scalar p, else an array shaped like p.
    """
    p_arr = np.asarray(p, dtype=np.float64)
    flat = p_arr.ravel()
    reach = inner_reach(scattering, spec)
    lo = np.maximum(flat - reach, 0.0)
    hi = flat + reach
    feats = _clean_features(features)
    cand = np.column_stack(
        (lo, hi, scattering.ring_edges(flat), np.broadcast_to(feats, (flat.size, feats.size)))
    )
    edges = np.sort(np.clip(cand, lo[:, None], hi[:, None]), axis=1)

    out = np.empty(flat.size)
    for start in range(0, flat.size, CHUNK):
        pc = flat[start : start + CHUNK]
        ec = edges[start : start + CHUNK]

        def rule(idx: np.ndarray, level: int, pc=pc, ec=ec) -> np.ndarray:
            s, ws = _smoothed_unit_rule(4 * 2 ** level)
            a = ec[idx, :-1, None]
            width = ec[idx, 1:, None] - a
            rho = a + width * s
            w = width * ws * rho * scattering.ring(rho, pc[idx, None, None])
            vals = np.asarray(h(rho), dtype=np.float64)
            num = np.where(w > 0, w * vals, 0.0).sum(axis=(1, 2))
            return num / w.sum(axis=(1, 2))

        out[start : start + CHUNK] = _refine_per_point(
            rule, pc.size, spec, name, lambda i, pc=pc: f"at offset {pc[i]:.6g}"
        )
    if p_arr.ndim == 0:
        return float(out[0])
    return out.reshape(p_arr.shape)


def density_rule(scattering: Scattering, level: int, reach: float) -> Tuple[np.ndarray, np.ndarray]:
    """Offsets and normalized weights of a polar rule for Y ~ f."""
    bp = [b for b in scattering.breakpoints() if b < reach]
    edges = np.unique(np.concatenate(([0.0, reach], bp)))
    r, w = _panel_nodes(edges, 4 * 2 ** level)
    n_theta = 16 * 2 ** level
    theta = (np.arange(n_theta) + 0.5) * (2.0 * np.pi / n_theta)
    wr = w * r * scattering.radial_density(r)
    unit = np.stack((np.cos(theta), np.sin(theta)), axis=-1)
    offsets = (r[:, None, None] * unit[None]).reshape(-1, 2)
    weights = np.repeat(wr, n_theta)
    return offsets, weights / weights.sum()


def density_average(
    func: PlaneFn,
    x,
    scattering: Scattering,
    spec: QuadratureSpec,
    *,
    name: str = "density_average",
) -> np.ndarray:
    """E[func(x + Y)] with Y ~ f for each point x (shape (m, 2) or (2,))."""
    pts = np.asarray(x, dtype=np.float64)
    single = pts.ndim == 1
    pts = pts.reshape(-1, 2)
    reach = inner_reach(scattering, spec)
    rules = {}
    chunk = max(1, CHUNK // 16)
    out = np.empty(pts.shape[0])
    for start in range(0, pts.shape[0], chunk):
        xc = pts[start : start + chunk]

        def rule(idx: np.ndarray, level: int, xc=xc) -> np.ndarray:
            if level not in rules:
                rules[level] = density_rule(scattering, level, reach)
            offsets, weights = rules[level]
            vals = np.asarray(func(xc[idx, None, :] + offsets[None, :, :]), dtype=np.float64)
            return vals @ weights

        out[start : start + chunk] = _refine_per_point(
            rule, xc.shape[0], spec, name, lambda i, xc=xc: f"at x=({xc[i, 0]:.6g}, {xc[i, 1]:.6g})"
        )
    return float(out[0]) if single else out


def pair_average(
    h: RadialFn,
    p,
    scattering: Scattering,
    spec: QuadratureSpec,
    *,
    features: Sequence[float] = (),
    name: str = "pair_average",
):
    """E[h(‖u + Y₁ + Y₂‖)] with Y₁, Y₂ ~ f independent, ‖u‖ = p.

    Y₁ + Y₂ has density f∗f, so this is ∫ h(‖u + x‖)(f∗f)(x) dx, computed as
    two nested ring averages.
    """
    inner_spec = spec.inner()
    shifted = tuple(features) + tuple(f + scattering.reach for f in features)

    def once(rho):
        return ring_average(h, rho, scattering, inner_spec, features=features, name=f"{name}:inner")

    return ring_average(once, p, scattering, spec, features=shifted, name=name)

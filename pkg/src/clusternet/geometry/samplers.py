"""Point-process samplers.

Parents of a cluster process are drawn on the window dilated by the
scattering reach, so clusters centred just outside the window still
contribute their daughters. Daughters are kept only if they fall inside the
window.

All samplers are pure given `(inputs, seed)`.
"""

from __future__ import annotations
from typing import Tuple

import numpy as np

from .models import ClusterModel, PointPattern, Window
from .streams import SeedLike, as_generator


def _uniform_in_disc(rng: np.random.Generator, window: Window, n: int) -> np.ndarray:
    u = rng.random((int(n), 2))
    r = window.radius * np.sqrt(u[:, 0])
    th = 2.0 * np.pi * u[:, 1]
    cx, cy = window.center
    return np.column_stack((cx + r * np.cos(th), cy + r * np.sin(th)))


def draw_ppp(intensity: float, window: Window, rng: np.random.Generator) -> np.ndarray:
    if intensity <= 0:
        return np.empty((0, 2))
    n = rng.poisson(intensity * window.area)
    return _uniform_in_disc(rng, window, n)


def draw_clusters(
    model: ClusterModel, window: Window, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (points inside window, parent index per kept point, size per cluster)."""
    empty = (np.empty((0, 2)), np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))
    if model.parent_intensity <= 0 or model.mean_cluster_size <= 0:
        return empty
    parents = draw_ppp(model.parent_intensity, window.dilated(model.reach), rng)
    if parents.shape[0] == 0:
        return empty
    sizes = np.asarray(
        model.count_law.sample(rng, model.mean_cluster_size, parents.shape[0]), dtype=np.int64
    )
    owner = np.repeat(np.arange(parents.shape[0]), sizes)
    pts = parents[owner] + model.scattering.sample_offsets(rng, owner.shape[0])
    keep = window.contains(pts)
    return pts[keep], owner[keep], sizes


def draw_palm_extra(model: ClusterModel, window: Window, rng: np.random.Generator) -> np.ndarray:
    """Siblings of the typical point at the origin (its own point excluded)."""
    if model.mean_cluster_size <= 0:
        return np.empty((0, 2))
    center = -model.scattering.sample_offsets(rng, 1)[0]
    k = model.count_law.palm_count(rng, model.mean_cluster_size)
    if k <= 0:
        return np.empty((0, 2))
    pts = center + model.scattering.sample_offsets(rng, k)
    return pts[window.contains(pts)]


def sample_ppp(intensity: float, window: Window, seed: SeedLike) -> PointPattern:
    if intensity < 0:
        raise ValueError(f"intensity must be >= 0, got {intensity}")
    return PointPattern(draw_ppp(intensity, window, as_generator(seed)), window)


def sample_cluster(model: ClusterModel, window: Window, seed: SeedLike) -> PointPattern:
    pts, owner, sizes = draw_clusters(model, window, as_generator(seed))
    return PointPattern(pts, window, parent_index=owner, cluster_sizes=sizes)


def sample_palm_cluster(model: ClusterModel, window: Window, seed: SeedLike) -> PointPattern:
    """Reduced Palm sample: ordinary pattern plus the typical point's own cluster."""
    rng = as_generator(seed)
    pts, owner, sizes = draw_clusters(model, window, rng)
    extra = draw_palm_extra(model, window, rng)
    marker = np.full(extra.shape[0], -1, dtype=np.int64)
    return PointPattern(
        np.vstack((pts, extra)),
        window,
        origin_conditioned=True,
        parent_index=np.concatenate((owner, marker)),
        cluster_sizes=sizes,
    )

"""Closed-form densities of a cluster model.

`x` / `z` may be a single 2-D point or an array of shape (..., 2); the return
has the matching leading shape (a float for a single point).
"""

from __future__ import annotations

import numpy as np

from .models import ClusterModel


def _radius(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.hypot(x[..., 0], x[..., 1])


def _out(v):
    v = np.asarray(v, dtype=np.float64)
    return float(v) if v.ndim == 0 else v


def daughter_density(model: ClusterModel, x):
    """f(x)."""
    return _out(model.scattering.radial_density(_radius(x)))


def daughter_density_selfconv(model: ClusterModel, z):
    """(f∗f)(z)."""
    return _out(model.scattering.selfconv(_radius(z)))


def second_order_density(model: ClusterModel, x):
    """ρ⁽²⁾(x) = λ² + λ_p Σp_n n(n−1) (f∗f)(x)."""
    lam = model.intensity
    pairs = model.parent_intensity * model.count_law.factorial_moment2(model.mean_cluster_size)
    return _out(lam * lam + pairs * model.scattering.selfconv(_radius(x)))

"""Neyman-Scott and Poisson point processes: models, densities, samplers."""

from .models import (
    ClusterModel,
    CountLaw,
    FixedCount,
    MaternBall,
    PointPattern,
    PoissonCount,
    Scattering,
    ThomasGaussian,
    Window,
)
from .densities import daughter_density, daughter_density_selfconv, second_order_density
from .samplers import sample_cluster, sample_palm_cluster, sample_ppp
from .streams import as_generator, derive_seed, substream

__all__ = [
    "ClusterModel",
    "CountLaw",
    "FixedCount",
    "MaternBall",
    "PointPattern",
    "PoissonCount",
    "Scattering",
    "ThomasGaussian",
    "Window",
    "daughter_density",
    "daughter_density_selfconv",
    "second_order_density",
    "sample_cluster",
    "sample_palm_cluster",
    "sample_ppp",
    "as_generator",
    "derive_seed",
    "substream",
]

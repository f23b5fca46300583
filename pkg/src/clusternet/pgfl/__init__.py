"""Quadrature engine and generating functionals of cluster processes."""

from .quadrature import (
    QuadratureSpec,
    QuadResult,
    density_average,
    gauss_legendre,
    integrate_plane,
    integrate_radial,
    pair_average,
    ring_average,
)
from .kernels import (
    Kernel,
    cdf_kernel,
    constant_kernel,
    half_plane_indicator,
    indicator_outside_ball,
    laplace_kernel,
    outage_kernel,
)
from .functional import (
    PgflResult,
    cluster_kernel_conv,
    conditional_laplace_interference,
    conditional_pgfl,
    empty_space_function,
    evaluate_pgfl,
    kernel_profile,
    nearest_neighbor_distribution,
    outer_radius,
    profile_features,
    truncation_radius,
    unconditional_pgfl,
)

__all__ = [
    "QuadratureSpec",
    "QuadResult",
    "density_average",
    "gauss_legendre",
    "integrate_plane",
    "integrate_radial",
    "pair_average",
    "ring_average",
    "Kernel",
    "cdf_kernel",
    "constant_kernel",
    "half_plane_indicator",
    "indicator_outside_ball",
    "laplace_kernel",
    "outage_kernel",
    "PgflResult",
    "cluster_kernel_conv",
    "conditional_laplace_interference",
    "conditional_pgfl",
    "empty_space_function",
    "evaluate_pgfl",
    "kernel_profile",
    "nearest_neighbor_distribution",
    "outer_radius",
    "profile_features",
    "truncation_radius",
    "unconditional_pgfl",
]

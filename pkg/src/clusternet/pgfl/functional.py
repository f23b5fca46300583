"""Generating functionals of Neyman-Scott processes.

For a kernel v with complement K = 1 − v and Q = K∗f:

    G̃(v) = exp(−λ_p ∫ [1 − M(1 − Q(x))] dx)            (unconditional)
    𝒢(v) = G̃(v) · ∫ M⁰(1 − Q(y)) f(y) dy                  (reduced Palm)

where M is the count-law generating function and M⁰ the generating function of
the typical point's siblings. Both integrands go through the count law's
`void_complement` and `palm_pgf`, so the code is the same for every law.

Isotropic kernels reduce Q to a radial profile (one `ring_average` per
distance) and the outer integral to `integrate_radial`; other kernels use the
2-D polar rules.
"""

from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Optional, Tuple

import numpy as np

from ..errors import UnsupportedOperationError
from ..geometry.models import ClusterModel, Scattering
from .kernels import Kernel, indicator_outside_ball, laplace_kernel
from .quadrature import (
    QuadratureSpec,
    QuadResult,
    density_average,
    inner_reach,
    integrate_plane,
    integrate_radial,
    ring_average,
)

if TYPE_CHECKING:
    from ..montecarlo.config import NetworkConfig

log = logging.getLogger("clusternet.pgfl")

# outer radius search stops here (power tails with α close to 2)
R_OUT_CAP = 1e15


@dataclass(frozen=True)
class PgflResult:
    value: float
    unconditional: float
    cluster_factor: float
    void_integral: float
    r_out: float
    error: float
    method: str


def _spec(spec: Optional[QuadratureSpec]) -> QuadratureSpec:
    return spec if spec is not None else QuadratureSpec()


def profile_features(kernel: Kernel, scattering: Scattering) -> Tuple[float, ...]:
    """Feature radii of Q = K∗f: those of K shifted by ± the scattering reach."""
    reach = scattering.reach
    feats = {reach}
    for f in kernel.features:
        feats.update((f, f + reach, abs(f - reach)))
    return tuple(sorted(v for v in feats if v > 0))


def truncation_radius(
    kernel: Kernel, spec: QuadratureSpec, *, reach: float, weight: float = 1.0
) -> float:
    """Radius beyond which weight·∫(1 − v) is below abs_tol/10, plus `reach`."""
    if spec.r_out is not None:
        return float(spec.r_out)
    if kernel.tail is None:
        raise ValueError(
            f"kernel {kernel.name!r} has no tail bound; set QuadratureSpec.r_out explicitly"
        )
    budget = 0.1 * spec.abs_tol / max(weight, 1e-300)
    radius = max(kernel.features) if kernel.features else 1.0
    while kernel.tail(radius) > budget:
        if radius > R_OUT_CAP:
            log.warning(
                f"{kernel.name}: tail bound {kernel.tail(radius):.3g} still above {budget:.3g} "
                f"at R={radius:.3g}; truncating"
            )
            break
        radius *= 2.0
    return float(radius + reach)


def outer_radius(kernel: Kernel, model: ClusterModel, spec: QuadratureSpec) -> float:
    """Truncation of the void integral: its integrand is at most c̄·Q, scaled by λ_p."""
    return truncation_radius(
        kernel,
        spec,
        reach=inner_reach(model.scattering, spec),
        weight=model.parent_intensity * model.mean_cluster_size,
    )


def kernel_profile(
    kernel: Kernel, model: ClusterModel, spec: QuadratureSpec
) -> Callable[[np.ndarray], np.ndarray]:
    """d ↦ Q at distance d from the kernel centre (isotropic kernels only)."""
    if not kernel.isotropic:
        raise ValueError(f"kernel {kernel.name!r} is not isotropic")

    def profile(d):
        return ring_average(
            kernel.radial_complement,
            d,
            model.scattering,
            spec,
            features=kernel.features,
            name=f"{kernel.name}:conv",
        )

    return profile


def _plane_profile(
    kernel: Kernel, model: ClusterModel, spec: QuadratureSpec
) -> Callable[[np.ndarray], np.ndarray]:
    def profile(x):
        x = np.asarray(x, dtype=np.float64)
        vals = density_average(
            kernel.complement, x.reshape(-1, 2), model.scattering, spec, name=f"{kernel.name}:conv"
        )
        return np.asarray(vals).reshape(x.shape[:-1])

    return profile


def cluster_kernel_conv(
    v: Kernel, model: ClusterModel, x, spec: Optional[QuadratureSpec] = None
):
    """(v∗f)(x) ∈ [0, 1] for one point (float) or an array of points."""
    spec = _spec(spec)
    x = np.asarray(x, dtype=np.float64)
    if v.constant is not None:
        out = np.full(x.shape[:-1], v.constant)
    elif v.isotropic:
        d = np.hypot(x[..., 0] - v.center[0], x[..., 1] - v.center[1])
        out = 1.0 - np.asarray(kernel_profile(v, model, spec)(d))
    else:
        out = 1.0 - _plane_profile(v, model, spec)(x)
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _constant_result(v: Kernel, model: ClusterModel) -> PgflResult:
    q = 1.0 - float(v.constant)
    law, mean = model.count_law, model.mean_cluster_size
    hole = float(law.void_complement(q, mean))
    if model.parent_intensity > 0 and hole > 0:
        void, unconditional = float("inf"), 0.0
    else:
        void, unconditional = 0.0, 1.0
    factor = float(law.palm_pgf(q, mean))
    return PgflResult(unconditional * factor, unconditional, factor, void, 0.0, 0.0, "constant")


def void_integral(kernel: Kernel, model: ClusterModel, spec: QuadratureSpec) -> QuadResult:
    """∫ [1 − M(1 − Q(x))] dx."""
    law, mean = model.count_law, model.mean_cluster_size
    r_out = outer_radius(kernel, model, spec)
    feats = profile_features(kernel, model.scattering)
    name = f"void_integral[{kernel.name}]"
    if kernel.isotropic:
        profile = kernel_profile(kernel, model, spec.inner())
        return integrate_radial(
            lambda d: law.void_complement(profile(d), mean),
            spec,
            r_out=r_out,
            features=feats,
            name=name,
        )
    profile = _plane_profile(kernel, model, spec.inner())
    return integrate_plane(
        lambda x: law.void_complement(profile(x), mean),
        spec,
        center=kernel.center,
        features=feats,
        r_out=r_out,
        name=name,
    )


def cluster_factor(kernel: Kernel, model: ClusterModel, spec: QuadratureSpec) -> float:
    """∫ M⁰(1 − Q(y)) f(y) dy: the typical point's own cluster."""
    law, mean = model.count_law, model.mean_cluster_size
    if float(law.palm_pgf(1.0, mean)) == 1.0:
        return 1.0  # the typical point has no siblings
    name = f"cluster_factor[{kernel.name}]"
    if kernel.isotropic:
        profile = kernel_profile(kernel, model, spec.inner())
        p = float(np.hypot(*kernel.center))
        return float(
            ring_average(
                lambda rho: law.palm_pgf(profile(rho), mean),
                p,
                model.scattering,
                spec,
                features=profile_features(kernel, model.scattering),
                name=name,
            )
        )
    profile = _plane_profile(kernel, model, spec.inner())
    return float(
        density_average(
            lambda y: law.palm_pgf(profile(y), mean), (0.0, 0.0), model.scattering, spec, name=name
        )
    )


def evaluate_pgfl(
    v: Kernel, model: ClusterModel, spec: Optional[QuadratureSpec] = None
) -> PgflResult:
    """Both generating functionals plus their diagnostics."""
    spec = _spec(spec)
    if v.constant is not None:
        return _constant_result(v, model)
    v.assert_range()
    method = "radial" if v.isotropic else "plane"
    if model.parent_intensity > 0 and model.mean_cluster_size > 0:
        void = void_integral(v, model, spec)
        void_value, void_err, r_out = void.value, void.error, void.r_out
    else:
        void_value, void_err, r_out = 0.0, 0.0, 0.0
    unconditional = float(np.exp(-model.parent_intensity * void_value))
    factor = cluster_factor(v, model, spec)
    value = unconditional * factor
    error = value * model.parent_intensity * void_err + unconditional * spec.rel_tol * factor
    log.debug(f"pgfl[{v.name}] G~={unconditional:.10g} factor={factor:.10g} r_out={r_out:.4g}")
    return PgflResult(
        float(np.clip(value, 0.0, 1.0)),
        float(np.clip(unconditional, 0.0, 1.0)),
        float(np.clip(factor, 0.0, 1.0)),
        void_value,
        r_out,
        float(error),
        method,
    )


def unconditional_pgfl(
    v: Kernel, model: ClusterModel, spec: Optional[QuadratureSpec] = None
) -> float:
    """G̃(v) = E[∏ v(x)] over the stationary process."""
    spec = _spec(spec)
    if v.constant is not None:
        return _constant_result(v, model).unconditional
    if model.parent_intensity <= 0 or model.mean_cluster_size <= 0:
        return 1.0
    void = void_integral(v, model, spec)
    return float(np.clip(np.exp(-model.parent_intensity * void.value), 0.0, 1.0))


def conditional_pgfl(
    v: Kernel, model: ClusterModel, spec: Optional[QuadratureSpec] = None
) -> float:
    """𝒢(v) under the reduced Palm distribution."""
    return evaluate_pgfl(v, model, spec).value


def conditional_laplace_interference(
    cfg: "NetworkConfig", s: float, spec: Optional[QuadratureSpec] = None
) -> float:
    """𝓛_{I(z)}(s) seen by the receiver of the typical link."""
    if not cfg.fading.has_laplace:
        raise UnsupportedOperationError(
            f"{cfg.fading.kind} fading has no Laplace transform; "
            "use the CDF-based interference bounds or Monte Carlo"
        )
    kernel = laplace_kernel(cfg.fading, cfg.pathloss, s, cfg.receiver)
    return conditional_pgfl(kernel, cfg.cluster, spec)


def empty_space_function(
    model: ClusterModel, r: float, spec: Optional[QuadratureSpec] = None
) -> float:
    """P(some point of the process lies in B(0, r))."""
    return 1.0 - unconditional_pgfl(indicator_outside_ball(r), model, spec)


def nearest_neighbor_distribution(
    model: ClusterModel, r: float, spec: Optional[QuadratureSpec] = None
) -> float:
    """D(r): P(the typical point has a neighbour within r)."""
    return 1.0 - conditional_pgfl(indicator_outside_ball(r), model, spec)

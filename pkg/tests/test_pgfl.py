from __future__ import annotations

import numpy as np
import pytest
from scipy import integrate

from clusternet.channel import BOUNDED, GeneralizedPareto, PathLoss, RayleighPower
from clusternet.errors import UnsupportedOperationError
from clusternet.geometry import ClusterModel, MaternBall, ThomasGaussian
from clusternet.montecarlo import NetworkConfig
from clusternet.pgfl import (
    Kernel,
    QuadratureSpec,
    cluster_kernel_conv,
    conditional_laplace_interference,
    conditional_pgfl,
    constant_kernel,
    empty_space_function,
    evaluate_pgfl,
    indicator_outside_ball,
    integrate_plane,
    integrate_radial,
    laplace_kernel,
    nearest_neighbor_distribution,
    ring_average,
    unconditional_pgfl,
)

SIGMA = 0.25


def _lens(d: float, r1: float, r2: float) -> float:
    """Area of the intersection of two discs whose centres are d apart."""
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        return np.pi * min(r1, r2) ** 2
    a = r1 * r1 * np.arccos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1))
    b = r2 * r2 * np.arccos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2))
    c = 0.5 * np.sqrt((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2))
    return a + b - c


def test_integrate_radial_gaussian(spec):
    res = integrate_radial(lambda r: np.exp(-r * r), spec, r_out=8.0)
    assert res.value == pytest.approx(np.pi, rel=1e-6)
    assert float(res) == res.value


def test_integrate_plane_half_disc(spec):
    res = integrate_plane(
        lambda x: (x[..., 0] > 0).astype(float), spec, r_out=1.0, features=(1.0,)
    )
    assert res.value == pytest.approx(np.pi / 2.0, rel=1e-9)


def test_integrate_plane_needs_radius(spec):
    with pytest.raises(ValueError):
        integrate_plane(lambda x: np.ones(x.shape[:-1]), spec)


@pytest.mark.parametrize("p", [0.0, 0.4, 1.5])
def test_ring_average_second_moment(spec, p):
    thomas = ring_average(lambda r: r * r, p, ThomasGaussian(SIGMA), spec)
    assert thomas == pytest.approx(p * p + 2 * SIGMA ** 2, rel=1e-5)
    matern = ring_average(lambda r: r * r, p, MaternBall(0.6), spec)
    assert matern == pytest.approx(p * p + 0.6 ** 2 / 2, rel=1e-5)


def test_ring_average_vectorized(spec):
    p = np.array([[0.0, 0.5], [1.0, 2.0]])
    out = ring_average(lambda r: np.ones_like(r), p, ThomasGaussian(SIGMA), spec)
    assert out.shape == (2, 2)
    np.testing.assert_allclose(out, 1.0)


def test_constant_kernels():
    model = ClusterModel(1.0, 3.0, ThomasGaussian(SIGMA))
    one = evaluate_pgfl(constant_kernel(1.0), model)
    assert one.value == 1.0 and one.unconditional == 1.0
    half = evaluate_pgfl(constant_kernel(0.5), model)
    assert half.unconditional == 0.0
    assert half.cluster_factor == pytest.approx(np.exp(-1.5))
    with pytest.raises(ValueError):
        constant_kernel(1.5)


def test_kernel_range_is_checked():
    bad = Kernel("bad", radial_complement=lambda d: np.full(np.shape(d), 2.0))
    with pytest.raises(ValueError):
        bad.assert_range()


def test_no_parents_is_identity(spec):
    model = ClusterModel(0.0, 3.0, ThomasGaussian(SIGMA))
    kernel = laplace_kernel(RayleighPower(1.0), PathLoss(BOUNDED, 4.0), 2.0)
    assert unconditional_pgfl(kernel, model, spec) == 1.0


@pytest.mark.parametrize("s", [0.5, 1.0, 4.0])
def test_single_daughter_clusters_are_poisson(spec, s):
    # one daughter per parent displaces a PPP into a PPP of the same intensity
    model = ClusterModel.fixed(1.0, 1, ThomasGaussian(SIGMA))
    kernel = laplace_kernel(RayleighPower(1.0), PathLoss(BOUNDED, 4.0), s)
    expected = np.exp(-s * np.pi ** 2 / (2.0 * np.sqrt(1.0 + s)))
    assert unconditional_pgfl(kernel, model, spec) == pytest.approx(expected, rel=1e-4)
    assert conditional_pgfl(kernel, model, spec) == pytest.approx(expected, rel=1e-4)


def test_empty_space_matern(spec):
    lam_p, cbar, a, r = 1.0, 3.0, 0.6, 0.3
    model = ClusterModel(lam_p, cbar, MaternBall(a))

    def hole(d: float) -> float:
        return 2 * np.pi * d * -np.expm1(-cbar * _lens(d, a, r) / (np.pi * a * a))

    void, _ = integrate.quad(hole, 0.0, a + r, points=[a - r], limit=200)
    expected = -np.expm1(-lam_p * void)
    assert empty_space_function(model, r, spec) == pytest.approx(expected, rel=1e-4)


def test_clustering_orders_void_functions(spec):
    model = ClusterModel(1.0, 3.0, ThomasGaussian(SIGMA))
    lam = model.intensity
    prev = 0.0
    for r in (0.1, 0.3, 0.6):
        f = empty_space_function(model, r, spec)
        d = nearest_neighbor_distribution(model, r, spec)
        assert prev < f < -np.expm1(-lam * np.pi * r * r)
        assert d > f
        prev = f


def test_conditioning_lowers_the_laplace_transform(thomas_net, spec):
    kernel = laplace_kernel(thomas_net.fading, thomas_net.pathloss, 1.0, thomas_net.receiver)
    res = evaluate_pgfl(kernel, thomas_net.cluster, spec)
    assert 0.0 < res.value < res.unconditional < 1.0
    assert res.value == pytest.approx(res.unconditional * res.cluster_factor)
    assert conditional_laplace_interference(thomas_net, 1.0, spec) == pytest.approx(res.value)


def test_laplace_needs_a_transform(bounded_net, spec):
    net = NetworkConfig(
        bounded_net.cluster, bounded_net.pathloss, GeneralizedPareto(), 1.0, 0.5
    )
    with pytest.raises(UnsupportedOperationError):
        conditional_laplace_interference(net, 1.0, spec)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(r_out=-1.0)
    assert QuadratureSpec(rel_tol=1e-4).inner().rel_tol == pytest.approx(1e-5)


def test_cluster_kernel_conv(spec):
    model = ClusterModel(1.0, 3.0, MaternBall(0.6))
    hole = indicator_outside_ball(0.3)
    # share of a Matern cluster centred at x that falls outside B(0, 0.3)
    assert cluster_kernel_conv(hole, model, (0.0, 0.0), spec) == pytest.approx(0.75, rel=1e-5)
    assert cluster_kernel_conv(hole, model, (2.0, 0.0), spec) == pytest.approx(1.0)
    out = cluster_kernel_conv(constant_kernel(0.5), model, np.zeros((3, 2)), spec)
    np.testing.assert_allclose(out, 0.5)

from __future__ import annotations

import numpy as np
import pytest
from scipy import special

from clusternet.channel import BOUNDED, SINGULAR, NakagamiPower, PathLoss
from clusternet.errors import DivergentMeanError, UnsupportedOperationError
from clusternet.geometry import ClusterModel, MaternBall, ThomasGaussian
from clusternet.metrics import (
    beta,
    beta_fixed,
    beta_summary,
    ccdf_bounds,
    cluster_factor_limit,
    clustering_gain,
    constrained_capacity,
    ds_cdma_outage_scaling,
    gain_crossover,
    gain_monotonicity_check,
    gain_split,
    lambda_star,
    mean_interference,
    mean_interference_thomas,
    poisson_beta_integral,
    poisson_capacity,
    poisson_success,
    spread_spectrum_compare,
    success_bounds,
    success_probability,
    success_probability_fixed,
    success_probability_nakagami,
    success_terms,
    tail_constants,
    transmission_capacity,
)
from clusternet.pgfl import QuadratureSpec

HALF_PI_SQ = np.pi ** 2 / 2.0
SLACK = 1e-8


def test_poisson_beta_integral_singular(spec):
    pl = PathLoss(SINGULAR, 4.0)
    assert poisson_beta_integral(pl, 1.0, 1.0) == pytest.approx(HALF_PI_SQ, rel=1e-12)
    quad = poisson_beta_integral(pl, 1.0, 1.0, spec, closed_form=False)
    assert quad == pytest.approx(HALF_PI_SQ, rel=1e-4)


@pytest.mark.parametrize("threshold,link", [(1.0, 0.5), (0.5, 1.0), (2.0, 0.0)])
def test_poisson_beta_integral_bounded(spec, threshold, link):
    pl = PathLoss(BOUNDED, 4.0)
    closed = poisson_beta_integral(pl, threshold, link)
    quad = poisson_beta_integral(pl, threshold, link, spec, closed_form=False)
    assert quad == pytest.approx(closed, rel=1e-4)


def test_poisson_success_and_capacity():
    pl = PathLoss(SINGULAR, 4.0)
    assert poisson_success(pl, 1.0, 1.0, 1.0) == pytest.approx(7.19e-3, rel=1e-3)
    assert poisson_success(pl, 1.0, 1.0, 0.0) == 1.0
    assert poisson_capacity(HALF_PI_SQ, 0.1) == pytest.approx(0.01922, rel=1e-3)
    with pytest.raises(ValueError):
        poisson_success(pl, 1.0, 1.0, -1.0)


def test_beta_integrates_to_poisson_reference(thomas_net, spec):
    summary = beta_summary(thomas_net, spec)
    closed = poisson_beta_integral(thomas_net.pathloss, 1.0, thomas_net.link_distance)
    assert summary.beta_I == pytest.approx(closed, rel=1e-4)
    assert 0.0 < summary.kappa <= summary.beta_hat <= 1.0
    assert summary.f_hat_star == pytest.approx(1.0 / (4.0 * np.pi * 0.25 ** 2))


@pytest.mark.parametrize("y", [(0.0, 0.0), (0.1, -0.2), (-0.5, 0.3)])
def test_beta_and_its_complement(bounded_net, spec, y):
    b = beta(bounded_net, y, spec)
    assert 0.0 <= b <= 1.0
    assert b + beta_fixed(bounded_net, y, spec) == pytest.approx(1.0, abs=1e-5)


def test_single_daughter_success_is_poisson(make_network, spec):
    net = make_network(SINGULAR).with_updates(
        cluster=ClusterModel.fixed(1.0, 1, ThomasGaussian(0.25))
    )
    pp = poisson_success(net.pathloss, net.threshold, net.link_distance, 1.0)
    assert success_probability_fixed(net, spec) == pytest.approx(pp, rel=1e-4)
    assert success_probability(net, spec) == pytest.approx(pp, rel=1e-4)


def test_fixed_cluster_forms_agree(make_network, spec):
    net = make_network(BOUNDED).with_updates(
        cluster=ClusterModel.fixed(0.5, 3, MaternBall(0.6))
    )
    assert success_probability_fixed(net, spec) == pytest.approx(
        success_probability(net, spec), rel=1e-4
    )


def test_noise_factor(bounded_net, spec):
    noisy = bounded_net.with_updates(noise=0.2)
    ratio = success_probability(noisy, spec) / success_probability(bounded_net, spec)
    assert ratio == pytest.approx(np.exp(-0.2 / bounded_net.link_gain), rel=1e-10)
    terms = success_terms(noisy, spec)
    assert terms.value == pytest.approx(terms.t1 * terms.t2 * terms.noise_factor)


def test_nakagami_one_matches_rayleigh(bounded_net):
    spec = QuadratureSpec(rel_tol=1e-5)
    rayleigh = success_probability(bounded_net, spec)
    assert success_probability_nakagami(bounded_net, spec, 1) == pytest.approx(rayleigh, rel=1e-4)


def test_rayleigh_forms_refuse_other_fading(bounded_net, spec):
    with pytest.raises(UnsupportedOperationError):
        success_probability(bounded_net.with_updates(fading=NakagamiPower(2)), spec)


@pytest.mark.parametrize("kind", [SINGULAR, BOUNDED])
@pytest.mark.parametrize("link", [0.25, 1.0])
@pytest.mark.parametrize("cbar", [0.5, 4.0])
def test_success_bounds_ordering(make_network, spec, kind, link, cbar):
    net = make_network(kind, link_distance=link, mean_cluster_size=cbar)
    b = success_bounds(net, spec)
    p = success_probability(net, spec)
    slack = SLACK + 1e-5 * p
    assert b.lower <= p + slack
    assert p <= b.tight_upper + slack
    assert b.tight_upper <= b.upper + slack


def test_bounds_need_zero_noise(bounded_net, spec):
    with pytest.raises(ValueError):
        success_bounds(bounded_net.with_updates(noise=0.1), spec)


def test_gain_vanishes_for_tiny_clusters(make_network, spec):
    assert clustering_gain(make_network(BOUNDED, mean_cluster_size=1e-3), spec) == pytest.approx(
        1.0, abs=1e-2
    )


def test_gain_forms_agree(make_network, spec):
    split = gain_split(make_network(BOUNDED, threshold=0.5, link_distance=1.0), spec)
    assert split.agree
    assert split.gain == pytest.approx(split.p1 * split.p2 / split.poisson)


def test_own_cluster_factor_far_limit(make_network, spec):
    net = make_network(BOUNDED, link_distance=20.0)
    assert success_terms(net, spec).t2 == pytest.approx(cluster_factor_limit(net), rel=2e-2)
    assert cluster_factor_limit(net) == pytest.approx(np.exp(-2.0 / (1.0 + 1.0)))


@pytest.mark.slow
def test_lambda_star_anchor(make_network, spec):
    net = make_network(BOUNDED, threshold=0.5, link_distance=0.0)
    assert lambda_star(net, spec) == pytest.approx(2.02, abs=0.03)
    stars = [lambda_star(net.with_updates(threshold=t), spec) for t in (0.1, 0.5, 1.0, 2.0)]
    assert stars == sorted(stars, reverse=True)
    assert stars[2] == pytest.approx(1.17, abs=0.03)


@pytest.mark.slow
def test_gain_curve_anchor(make_network, spec):
    sparse = make_network(
        BOUNDED, parent_intensity=0.125, mean_cluster_size=6.0, threshold=0.5, link_distance=0.0
    )
    assert clustering_gain(sparse, spec) == pytest.approx(0.25, abs=0.1)
    assert gain_crossover(sparse, 0.5, 2.0, spec) == pytest.approx(1.2, abs=0.15)
    dense = sparse.with_cluster(parent_intensity=3.0, mean_cluster_size=3.0)
    assert clustering_gain(dense, spec) > 5.0
    assert gain_crossover(dense, 0.0, 3.0, spec) is None


@pytest.mark.slow
def test_success_crossover_anchor(make_network, spec):
    net = make_network(scattering=MaternBall(0.6), threshold=0.02)
    assert gain_crossover(net, 0.4, 1.5, spec) == pytest.approx(0.8, abs=0.15)
    for r, clustered_wins in ((0.6, False), (1.0, True)):
        link = net.with_updates(link_distance=r)
        ppp = poisson_success(link.pathloss, link.threshold, r, link.cluster.intensity, spec)
        assert (success_probability(link, spec) > ppp) == clustered_wins


@pytest.mark.parametrize("scattering", [ThomasGaussian(0.25), MaternBall(0.6)])
@pytest.mark.parametrize("link", [0.02, 0.05])
def test_short_links_favour_the_ppp(make_network, spec, scattering, link):
    net = make_network(SINGULAR, scattering=scattering, link_distance=link)
    ppp = poisson_success(net.pathloss, net.threshold, link, net.cluster.intensity, spec)
    assert success_probability(net, spec) < ppp


def test_fixed_and_poisson_cluster_sizes_differ(make_network, spec):
    poisson = make_network(BOUNDED, parent_intensity=0.5, mean_cluster_size=3.0)
    fixed = poisson.with_updates(cluster=ClusterModel.fixed(0.5, 3, ThomasGaussian(0.25)))
    p_poisson = success_probability(poisson, spec)
    p_fixed = success_probability_fixed(fixed, spec)
    assert p_fixed < p_poisson
    assert p_poisson - p_fixed > 1e-2 * p_poisson


@pytest.mark.slow
def test_gain_monotonicity_matches_lambda_star(make_network, spec):
    base = make_network(BOUNDED, threshold=0.5, link_distance=0.0)
    star = lambda_star(base, spec)
    net = base.with_cluster(parent_intensity=0.5 * star, mean_cluster_size=1.0)
    ledger = gain_monotonicity_check(net, spec)
    assert ledger.predicted_decreasing
    assert ledger.consistent


def test_tail_constants_thomas(make_network):
    net = make_network(SINGULAR, link_distance=1.0)
    theta1, theta2 = tail_constants(net)
    selfconv = np.exp(-4.0) / (4.0 * np.pi * 0.25 ** 2)
    expected = np.pi * (2.0 + 2.0 * selfconv) * special.gamma(1.5)
    assert theta1 == pytest.approx(expected, rel=1e-12)
    assert theta1 == pytest.approx(5.70, rel=1e-2)
    assert theta2 == pytest.approx(theta1)


def test_tail_constants_matern_far_receiver(make_network):
    net = make_network(SINGULAR, scattering=MaternBall(0.3), link_distance=1.0, alpha=3.0)
    theta1, theta2 = tail_constants(net)
    assert theta1 == pytest.approx(np.pi * 2.0 * special.gamma(1.0 + 2.0 / 3.0))
    assert theta2 == pytest.approx(2.0 * theta1)
    with pytest.raises(ValueError):
        tail_constants(make_network(BOUNDED))


def test_ccdf_bounds_sandwich(thomas_net, spec):
    for y in (0.1, 1.0, 10.0):
        b = ccdf_bounds(thomas_net, y, spec)
        assert 0.0 <= b.lower <= b.upper <= 1.0
        assert b.theta2 == pytest.approx(b.theta1)


@pytest.mark.slow
def test_ccdf_lower_bound_tail(make_network, spec):
    net = make_network(SINGULAR, link_distance=1.0)
    y = 1e4 * net.link_gain
    b = ccdf_bounds(net, y, spec)
    assert np.sqrt(y) * b.lower == pytest.approx(b.theta1, rel=0.05)


def test_mean_interference(bounded_net, spec):
    unconditioned = mean_interference(bounded_net, False, spec)
    assert unconditioned == pytest.approx(2.0 * HALF_PI_SQ, rel=1e-12)
    conditioned = mean_interference(bounded_net, True, spec)
    assert conditioned > unconditioned
    assert mean_interference_thomas(bounded_net, True, spec) == pytest.approx(
        conditioned, rel=1e-5
    )
    with pytest.raises(DivergentMeanError):
        mean_interference(bounded_net.with_updates(pathloss=PathLoss(SINGULAR, 4.0)))


def test_transmission_capacity(make_network, spec):
    net = make_network(SINGULAR, link_distance=1.0)
    res = transmission_capacity(net, 0.01, spec)
    assert res.poisson == pytest.approx(poisson_capacity(HALF_PI_SQ, 0.01), rel=1e-4)
    assert res.threshold_epsilon == pytest.approx(-np.expm1(-res.rho))
    assert res.valid == (0.01 < res.threshold_epsilon)
    if res.valid:
        assert res.unconstrained == res.poisson
    else:
        assert np.isnan(res.unconstrained)
    with pytest.raises(ValueError):
        transmission_capacity(net, 1.5, spec)


@pytest.mark.slow
def test_constrained_capacity_bounds(make_network, spec):
    net = make_network(SINGULAR, link_distance=1.0)
    c = constrained_capacity(net, 0.1, 1.0, spec)
    tol = 1.0 + 1e-4
    assert c.lower <= c.exact * tol
    assert c.exact <= c.upper * tol
    assert c.exact == pytest.approx(1.0 * 0.9 * c.mean_cluster_size)


@pytest.mark.slow
def test_spread_spectrum_without_spreading(make_network, spec):
    net = make_network(SINGULAR, link_distance=1.0)
    cmp = spread_spectrum_compare(net, 0.1, 1.0, spec)
    assert cmp.frequency_hopping == pytest.approx(cmp.direct_sequence)
    assert np.isnan(cmp.log_ratio)
    with pytest.raises(ValueError):
        spread_spectrum_compare(net, 0.1, 0.5, spec)


def test_ds_cdma_outage_scaling(make_network):
    net = make_network(SINGULAR, link_distance=1.0)
    lo4, hi4 = ds_cdma_outage_scaling(net, 4.0)
    lo16, _ = ds_cdma_outage_scaling(net, 16.0)
    assert hi4 == pytest.approx(2.0 * lo4)
    assert lo16 == pytest.approx(0.5 * lo4)
    theta1, _ = tail_constants(net)
    assert lo4 == pytest.approx(theta1 * 4.0 ** -0.5 * np.sqrt(np.pi))
    with pytest.raises(ValueError):
        ds_cdma_outage_scaling(net, 0.5)


def test_bounds_for_a_lone_cluster(make_network, spec):
    net = make_network(BOUNDED, parent_intensity=0.0, mean_cluster_size=2.0)
    b = success_bounds(net, spec)
    p = success_probability(net, spec)
    assert p == pytest.approx(success_terms(net, spec).t2)
    assert p < 1.0
    assert b.upper == 1.0
    assert b.lower <= p + SLACK
    assert p <= b.tight_upper + SLACK
    empty = success_bounds(make_network(BOUNDED, parent_intensity=0.0, mean_cluster_size=0.0))
    assert (empty.lower, empty.upper, empty.tight_upper) == (1.0, 1.0, 1.0)


@pytest.mark.slow
def test_spread_spectrum_ratio(make_network, spec):
    net = make_network(SINGULAR, link_distance=1.0)
    ratios = [spread_spectrum_compare(net, 0.01, m, spec).log_ratio for m in (4.0, 16.0, 64.0)]
    assert all(0.4 <= r <= 0.6 for r in ratios)

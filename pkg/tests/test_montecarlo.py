from __future__ import annotations

import numpy as np
import pytest

from clusternet.channel import (
    BOUNDED,
    CLIPPED,
    SINGULAR,
    GeneralizedPareto,
    NakagamiPower,
    PathLoss,
    RayleighPower,
)
from clusternet.metrics import success_probability, success_probability_nakagami
from clusternet.montecarlo import (
    INTERFERENCE,
    EmpiricalDistribution,
    MonteCarloEstimate,
    SimSpec,
    draw_patterns,
    empirical_mean_interference,
    simulate_interference,
    simulate_success_probability,
    simulate_truncation_audit,
    simulate_void_probability,
    solve_simulation_radius,
    worker_count,
)
from clusternet.pgfl import QuadratureSpec, empty_space_function

SMALL = SimSpec(trials=600, radius=6.0, seed=3, batch_size=100)
MC_BAND = 3.0


def test_empirical_distribution():
    dist = EmpiricalDistribution(np.array([3.0, 1.0, 4.0, 2.0]))
    assert dist.n == 4
    assert dist.ccdf(2.0) == 0.5
    np.testing.assert_allclose(dist.ccdf([0.0, 4.0]), [1.0, 0.0])
    assert dist.standard_error(2.0) == pytest.approx(0.25)
    assert dist.ci_halfwidth(2.0) == pytest.approx(1.96 * 0.25)
    assert dist.median == 2.5
    with pytest.raises(ValueError):
        EmpiricalDistribution(np.array([]))


def test_tail_slope_of_a_power_law():
    # P(X > y) = y^(-1/2) for X = U^(-2)
    u = np.random.default_rng(0).random(200_000)
    dist = EmpiricalDistribution(u ** -2.0)
    assert dist.tail_slope(0.1, 0.01) == pytest.approx(-0.5, abs=0.02)
    with pytest.raises(ValueError):
        EmpiricalDistribution(np.arange(5.0)).tail_slope()


def test_estimate_band():
    est = MonteCarloEstimate(0.5, 0.01, 1000, 5.0)
    assert est.within(0.53, 4.0)
    assert not est.within(0.6, 4.0)
    assert est.within(0.6, 4.0, slack=0.1)


def test_worker_count(monkeypatch):
    monkeypatch.delenv("CLUSTERNET_THREADS", raising=False)
    assert worker_count(8) == 8
    monkeypatch.setenv("CLUSTERNET_THREADS", "2")
    assert worker_count(8) == 2
    assert worker_count(1) == 1
    monkeypatch.setenv("CLUSTERNET_THREADS", "many")
    assert worker_count(8) == 8


def test_sim_spec_validation():
    with pytest.raises(ValueError):
        SimSpec(trials=0)
    with pytest.raises(ValueError):
        SimSpec(radius=-1.0)


def test_simulation_radius(make_network):
    net = make_network(BOUNDED)
    fixed = solve_simulation_radius(net, SimSpec(radius=7.0))
    assert fixed == 7.0
    auto = solve_simulation_radius(net, SimSpec(tail_tolerance=1e-2))
    assert auto >= 2 * net.link_distance + 4 * net.cluster.reach
    tighter = solve_simulation_radius(net, SimSpec(tail_tolerance=1e-3))
    assert tighter > auto


def test_no_transmitters_means_no_interference(make_network):
    net = make_network(BOUNDED, parent_intensity=0.0)
    dist = simulate_interference(net, SMALL, conditioned=False)
    assert np.all(dist.samples == 0.0)
    assert simulate_success_probability(net, SMALL).value == 1.0


def test_same_seed_same_samples(bounded_net):
    a = simulate_interference(bounded_net, SMALL)
    b = simulate_interference(bounded_net, SMALL)
    np.testing.assert_array_equal(a.samples, b.samples)
    c = simulate_interference(bounded_net, SMALL.with_updates(seed=4))
    assert not np.array_equal(a.samples, c.samples)
    assert a.tags["radius"] == 6.0 and a.tags["conditioned"]


def test_worker_determinism(bounded_net, monkeypatch):
    monkeypatch.delenv("CLUSTERNET_THREADS", raising=False)
    one = simulate_interference(bounded_net, SMALL.with_updates(workers=1))
    many = simulate_interference(bounded_net, SMALL.with_updates(workers=3))
    np.testing.assert_array_equal(one.samples, many.samples)


def test_patterns_match_the_simulated_trials(bounded_net):
    patterns = draw_patterns(bounded_net, SMALL, 3)
    assert len(patterns) == 3
    assert all(p.origin_conditioned for p in patterns)
    assert all(p.window.radius == 6.0 for p in patterns)
    again = draw_patterns(bounded_net, SMALL, 3)
    for p, q in zip(patterns, again):
        np.testing.assert_array_equal(p.points, q.points)


def test_mean_interference_diverges_for_singular_loss(make_network):
    est = empirical_mean_interference(make_network(SINGULAR), SMALL)
    assert est.diverges and est.value == float("inf")


def test_void_probability_matches_empty_space(make_network, spec):
    net = make_network(BOUNDED, parent_intensity=1.0, mean_cluster_size=3.0)
    radius = 0.3
    est = simulate_void_probability(
        net, SimSpec(trials=4000, seed=5, batch_size=500), radius, conditioned=False
    )
    reference = 1.0 - empty_space_function(net.cluster, radius, spec)
    assert est.within(reference, MC_BAND)


def test_success_matches_analytic(make_network, spec):
    net = make_network(BOUNDED, parent_intensity=0.1, mean_cluster_size=2.0)
    sim = SimSpec(trials=20_000, seed=11, tail_tolerance=1e-3, batch_size=2_000, workers=2)
    est = simulate_success_probability(net, sim)
    reference = success_probability(net, spec)
    assert 0.2 < reference < 0.8
    assert est.within(reference, MC_BAND)


def test_interference_radius_holds_the_tail_below_the_inside_mean(make_network):
    sim = SimSpec(tail_tolerance=1e-3)
    for kind in (BOUNDED, SINGULAR):
        net = make_network(kind)
        radius = solve_simulation_radius(net, sim, INTERFERENCE)
        near = PathLoss(CLIPPED, 4.0) if kind == SINGULAR else net.pathloss
        assert net.pathloss.tail_bound(radius) <= 1e-3 * near.ball_integral(1.0) * (1 + 1e-9)
        assert net.pathloss.tail_bound(radius) <= 1e-3 * near.ball_integral(radius)
    with pytest.raises(ValueError):
        solve_simulation_radius(make_network(BOUNDED), sim, "coverage")


def test_interference_radius_ignores_the_link(make_network):
    sim = SimSpec(tail_tolerance=1e-3)
    near = solve_simulation_radius(make_network(BOUNDED, link_distance=0.5), sim, INTERFERENCE)
    far = solve_simulation_radius(make_network(BOUNDED, link_distance=2.0), sim, INTERFERENCE)
    assert near == far
    success = solve_simulation_radius(make_network(BOUNDED, link_distance=2.0), sim)
    assert success != far


def test_heavy_tailed_fading_sizes_the_window_by_scale(make_network):
    net = make_network(BOUNDED)
    sim = SimSpec(tail_tolerance=1e-2)
    pareto = solve_simulation_radius(net.with_updates(fading=GeneralizedPareto(1.0, 2.0, 0.5)), sim)
    rayleigh = solve_simulation_radius(net.with_updates(fading=RayleighPower(0.4)), sim)
    assert np.isfinite(pareto)
    assert pareto == pytest.approx(rayleigh)


def test_palm_interference_depends_on_the_receiver(make_network):
    sim = SimSpec(trials=2000, radius=8.0, seed=21, batch_size=500)
    other = sim.with_updates(seed=22)
    close = make_network(BOUNDED, link_distance=0.025)
    distant = make_network(BOUNDED, link_distance=5.0)
    _, p_free = simulate_interference(close, sim, conditioned=False).ks_test(
        simulate_interference(distant, other, conditioned=False)
    )
    assert p_free > 0.01
    _, p_palm = simulate_interference(close, sim).ks_test(simulate_interference(distant, other))
    assert p_palm < 0.01


@pytest.mark.slow
def test_truncation_audit(make_network):
    net = make_network(BOUNDED, parent_intensity=0.1, mean_cluster_size=2.0)
    sim = SimSpec(trials=20_000, seed=13, batch_size=2_000, workers=2)
    audit = simulate_truncation_audit(net, sim)
    assert audit.outer.radius == pytest.approx(2.0 * audit.inner.radius)
    assert audit.passed
    assert audit.flips < 0.01 * sim.trials
    with pytest.raises(ValueError):
        simulate_truncation_audit(net, sim, factor=1.0)


@pytest.mark.slow
def test_nakagami_success_matches_simulation(make_network):
    net = make_network(BOUNDED, parent_intensity=0.25).with_updates(fading=NakagamiPower(2, 1.0))
    reference = success_probability_nakagami(net, QuadratureSpec(rel_tol=1e-5))
    est = simulate_success_probability(
        net, SimSpec(trials=20_000, seed=17, batch_size=2_000, workers=2)
    )
    assert 0.05 < reference < 0.95
    assert est.within(reference, MC_BAND)

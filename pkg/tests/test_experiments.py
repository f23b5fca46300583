from __future__ import annotations

import textwrap
from pathlib import Path

import numpy as np
import pytest

from clusternet.config import load_experiment_config
from clusternet.channel import BOUNDED, SINGULAR
from clusternet.experiments import make_experiment, register_experiment, validate
from clusternet.experiments.base import ANALYTIC, BOUND_LOWER, BOUND_UPPER, MONTECARLO
from clusternet.experiments.sweep import iter_points, list_parameters, register_parameter
from clusternet.experiments.success_curve import SuccessCurve
from clusternet.geometry import MaternBall, ThomasGaussian
from clusternet.montecarlo import MonteCarloEstimate, SimSpec
from clusternet.pgfl import QuadratureSpec

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

SMALL_SIM = """
simulation:
  trials: 400
  radius: 6.0
  batch_size: 100
"""


def _run(write_config, text: str):
    cfg = load_experiment_config(write_config(textwrap.dedent(text) + SMALL_SIM))
    return cfg, make_experiment(cfg.kind).run(cfg)


def _by(rows, metric: str, method: str):
    return [r for r in rows if r.metric == metric and r.method == method]


def test_sweep_points_carry_the_parameter(write_config):
    cfg = load_experiment_config(
        write_config("sweep:\n  parameter: mean_cluster_size\n  values: [1, 3]\n")
    )
    points = list(iter_points(cfg))
    assert [p.network.cluster.mean_cluster_size for p in points] == [1.0, 3.0]
    assert points[0].seed != points[1].seed


def test_parameter_registry():
    assert "link_distance" in list_parameters() and "level" in list_parameters()
    with pytest.raises(ValueError):
        register_parameter("threshold", lambda cfg, v: cfg)


def test_experiment_registry():
    with pytest.raises(ValueError):
        register_experiment(SuccessCurve)
    with pytest.raises(KeyError):
        make_experiment("heatmap")


def test_success_curve_rows(write_config):
    cfg, outcome = _run(
        write_config,
        """
        experiment:
          kind: success-curve
          methods: [analytic, poisson, bounds, montecarlo]
        sweep: {parameter: link_distance, values: [0.25, 1.0]}
        output: {write_patterns: 2}
        """,
    )
    assert len(_by(outcome.rows, "success", ANALYTIC)) == 2
    assert len(_by(outcome.rows, "poisson_success", ANALYTIC)) == 2
    for low, high in zip(
        _by(outcome.rows, "success", BOUND_LOWER), _by(outcome.rows, "success", ANALYTIC)
    ):
        assert low.value <= high.value + 1e-8
    mc = _by(outcome.rows, "success", MONTECARLO)
    assert all(r.uncertainty > 0 for r in mc)
    assert len(outcome.patterns) == 2
    assert outcome.diagnostics["formulas"] == {"0": "rayleigh"}
    assert outcome.passed


def test_gain_curve_without_crossover(write_config):
    _, outcome = _run(
        write_config,
        """
        experiment: {kind: gain-curve, crossover: false}
        sweep: {parameter: mean_cluster_size, values: [0.5, 2.0]}
        """,
    )
    gains = _by(outcome.rows, "gain", ANALYTIC)
    assert [r.param for r in gains] == [0.5, 2.0]
    assert all(r.value > 0 for r in gains)
    assert outcome.diagnostics == {"crossover": {}}


def test_ccdf_levels(write_config):
    _, outcome = _run(
        write_config,
        """
        experiment: {kind: ccdf, report_mean: true}
        network:
          cluster: {parent_intensity: 0.5}
        sweep: {parameter: level, min: 0.1, max: 10.0, points: 3, scale: log}
        """,
    )
    ccdf = [r.value for r in _by(outcome.rows, "ccdf", MONTECARLO)]
    assert len(ccdf) == 3
    assert ccdf == sorted(ccdf, reverse=True)
    assert len(_by(outcome.rows, "ccdf", BOUND_LOWER)) == 3
    assert len(_by(outcome.rows, "ccdf", BOUND_UPPER)) == 3
    means = [r for r in outcome.rows if r.metric == "mean_interference"]
    assert {r.method for r in means} == {ANALYTIC, MONTECARLO}
    assert all(np.isnan(r.param) and r.index == 3 for r in means)
    assert outcome.diagnostics["series"]["0"]["radius"] == 6.0


@pytest.mark.slow
def test_spread_spectrum_rows(write_config):
    _, outcome = _run(
        write_config,
        """
        experiment: {kind: spread-spectrum, epsilon: 0.01}
        network:
          pathloss: {kind: singular, alpha: 4.0}
          link_distance: 1.0
        sweep: {parameter: spreading, values: [1, 16]}
        """,
    )
    assert len(_by(outcome.rows, "capacity_fh", ANALYTIC)) == 2
    ratios = _by(outcome.rows, "log_ratio", ANALYTIC)
    assert [r.param for r in ratios] == [16.0]
    assert outcome.diagnostics["expected_log_ratio"] == {"0": 0.5}


@pytest.mark.slow
def test_capacity_sweep_rows(write_config):
    _, outcome = _run(
        write_config,
        """
        experiment: {kind: capacity-sweep}
        network:
          pathloss: {kind: singular, alpha: 4.0}
          link_distance: 1.0
        sweep: {parameter: epsilon, values: [0.01, 0.1]}
        """,
    )
    exact = _by(outcome.rows, "capacity_constrained", ANALYTIC)
    lower = _by(outcome.rows, "capacity_constrained", BOUND_LOWER)
    upper = _by(outcome.rows, "capacity_constrained", BOUND_UPPER)
    for lo, mid, hi in zip(lower, exact, upper):
        assert lo.value <= mid.value * (1 + 1e-4)
        assert mid.value <= hi.value * (1 + 1e-4)
    assert [p["epsilon"] for p in outcome.diagnostics["points"]] == [0.01, 0.1]


def test_success_grid_covers_both_laws_and_losses():
    grid = validate.success_grid()
    assert len(grid) == 8
    keys = {(type(n.cluster.scattering), n.pathloss.kind, n.link_distance) for n in grid}
    assert len(keys) == 8
    assert {k[0] for k in keys} == {ThomasGaussian, MaternBall}
    assert {k[1] for k in keys} == {SINGULAR, BOUNDED}


def test_montecarlo_band_is_three_standard_errors():
    est = MonteCarloEstimate(0.5, 0.01, 100_000, 5.0)
    assert est.within(0.529, validate.MC_BAND)
    assert not est.within(0.535, validate.MC_BAND)
    assert {"gain_anchor", "success_crossover", "truncation_audit"} <= set(validate.CHECKS)
    assert "truncation_audit" in validate.MONTECARLO_CHECKS


def test_archived_curves_use_the_anchor_networks():
    gain = load_experiment_config(str(CONFIGS / "gain_curve.yaml"))
    assert gain.network.cluster.parent_intensity == 0.125
    assert gain.network.cluster.mean_cluster_size == 6.0
    assert gain.network.threshold == 0.5
    success = load_experiment_config(str(CONFIGS / "success_curve.yaml"))
    assert success.network.cluster.scattering == MaternBall(0.6)
    assert success.network.threshold == 0.02


@pytest.mark.slow
@pytest.mark.parametrize("name", ["gain_anchor", "success_crossover", "lambda_star"])
def test_anchor_checks_pass(name):
    result = validate.CHECKS[name](QuadratureSpec(rel_tol=1e-6), SimSpec())
    assert result["passed"], result["detail"]

from __future__ import annotations

import json

import pytest

from clusternet.channel import BOUNDED, SINGULAR
from clusternet.config import deep_merge, load_defaults, load_experiment_config, load_yaml
from clusternet.errors import ConfigError
from clusternet.geometry import FixedCount, MaternBall, ThomasGaussian


def _error(path: str, **kwargs) -> ConfigError:
    with pytest.raises(ConfigError) as excinfo:
        load_experiment_config(path, **kwargs)
    return excinfo.value


def test_defaults_fill_missing_sections(write_config):
    cfg = load_experiment_config(
        write_config(
            """
            run:
              run_id: smoke
            network:
              threshold: 2.0
            """
        ),
        out_dir="out",
    )
    assert cfg.kind == "success-curve"
    assert cfg.run_id == "smoke"
    assert cfg.out_dir == "out"
    assert cfg.network.threshold == 2.0
    assert cfg.network.link_distance == 0.5
    assert cfg.network.pathloss.kind == BOUNDED
    assert isinstance(cfg.network.cluster.scattering, ThomasGaussian)
    assert cfg.sweep.parameter == "link_distance" and len(cfg.sweep) == 10
    assert cfg.quadrature.rel_tol == 1e-6
    assert cfg.raw["run"]["run_id"] == "smoke"


def test_deep_merge_replaces_a_mapping_of_another_kind():
    base = {"scattering": {"kind": "thomas", "sigma": 0.25}, "x": {"a": 1, "b": 2}}
    merged = deep_merge(base, {"scattering": {"kind": "matern", "radius": 0.6}, "x": {"b": 3}})
    assert merged["scattering"] == {"kind": "matern", "radius": 0.6}
    assert merged["x"] == {"a": 1, "b": 3}
    assert base["x"]["b"] == 2


def test_matern_scattering_from_yaml(write_config):
    cfg = load_experiment_config(
        write_config(
            """
            network:
              cluster:
                scattering: {kind: matern, radius: 0.6}
              pathloss: {kind: singular, alpha: 4.0}
            """
        )
    )
    assert cfg.network.cluster.scattering == MaternBall(0.6)
    assert cfg.network.pathloss.kind == SINGULAR


def test_cli_overrides(write_config):
    path = write_config("run:\n  seed: 4\n")
    cfg = load_experiment_config(path, seed=9, workers=3, kind="gain-curve")
    assert cfg.seed == 9
    assert cfg.simulation.workers == 3
    assert cfg.kind == "gain-curve"
    assert load_experiment_config(path).seed == 4


def test_auto_run_id_starts_with_the_kind(write_config):
    cfg = load_experiment_config(write_config("experiment:\n  kind: gain-curve\n"))
    assert cfg.run_id.startswith("gain-curve_")
    assert cfg.out_dir == f"runs/{cfg.run_id}"


def test_exponent_strings_are_numbers(write_config):
    cfg = load_experiment_config(write_config("network:\n  threshold: 1e-3\n"))
    assert cfg.network.threshold == pytest.approx(1e-3)


def test_log_sweep_and_series(write_config):
    cfg = load_experiment_config(
        write_config(
            """
            sweep:
              parameter: threshold
              min: 0.1
              max: 10
              points: 3
              scale: log
              series:
                - label: near
                  network: {link_distance: 0.2}
                - label: far
                  network: {link_distance: 1.0}
            """
        )
    )
    assert cfg.sweep.values == pytest.approx((0.1, 1.0, 10.0))
    assert [s.label for s in cfg.series] == ["near", "far"]
    assert cfg.series[1].network.link_distance == 1.0
    assert cfg.series[0].metric("success") == "success[near]"


def test_fixed_count_sets_the_cluster_size(write_config):
    cfg = load_experiment_config(
        write_config(
            """
            network:
              cluster:
                count: {kind: fixed, n: 3}
            """
        )
    )
    assert cfg.network.cluster.count_law == FixedCount(3)
    assert cfg.network.cluster.mean_cluster_size == 3.0


def test_pareto_fading_needs_montecarlo(write_config):
    path = write_config(
        """
        experiment:
          kind: success-curve
          methods: [analytic]
        network:
          fading:
            kind: pareto
        """
    )
    err = _error(path)
    assert err.field == "network.fading.kind"
    assert err.line == 6


def test_pareto_fading_with_montecarlo_only(write_config):
    path = write_config(
        """
        experiment:
          methods: [montecarlo]
        network:
          fading: {kind: pareto, k: 0.5}
        """
    )
    assert load_experiment_config(path).network.fading.kind == "pareto"


def test_nakagami_refuses_fixed_clusters(write_config):
    path = write_config(
        """
        experiment:
          kind: success-curve
          nakagami_m: 2
        network:
          cluster:
            count: {kind: fixed, n: 2}
        """
    )
    err = _error(path)
    assert err.field == "experiment.nakagami_m"
    assert err.line == 3


def test_unknown_sweep_parameter(write_config):
    err = _error(write_config("sweep:\n  parameter: wavelength\n"))
    assert err.field == "sweep.parameter"
    assert err.line == 2


def test_sweep_needs_two_points(write_config):
    err = _error(write_config("sweep:\n  parameter: threshold\n  points: 1\n"))
    assert err.field == "sweep.points"
    assert err.line == 3


def test_unknown_section(write_config):
    err = _error(write_config("run:\n  seed: 1\nplots:\n  dpi: 300\n"))
    assert err.field == "plots"
    assert err.line == 3


def test_unknown_key_points_at_its_line(write_config):
    err = _error(write_config("network:\n  link_distance: 0.5\n  thresh: 1.0\n"))
    assert err.field == "network.thresh"
    assert err.line == 3


def test_yaml_syntax_error_has_a_line(write_config):
    err = _error(write_config("run:\n  seed: 1\nnetwork: [unclosed\n"))
    assert err.line is not None and err.line >= 3
    assert err.field is None


def test_missing_file():
    with pytest.raises(ConfigError):
        load_experiment_config("/nonexistent/clusternet.yaml")


def test_ccdf_sweeps_levels(write_config):
    err = _error(write_config("experiment:\n  kind: ccdf\n"))
    assert err.field == "sweep.parameter"


def test_ccdf_conditioned_mean_under_singular_loss(write_config):
    path = write_config(
        """
        experiment:
          kind: ccdf
          report_mean: true
        network:
          pathloss: {kind: singular, alpha: 4.0}
        sweep: {parameter: level, min: 0.1, max: 10, points: 3, scale: log}
        """
    )
    err = _error(path)
    assert err.field == "experiment.report_mean"
    assert err.line == 3


def test_duplicate_series_label(write_config):
    path = write_config(
        """
        sweep:
          series:
            - {label: a}
            - {label: a}
        """
    )
    assert _error(path).field == "sweep.series[1].label"


def test_epsilon_range(write_config):
    path = write_config("experiment:\n  kind: capacity-sweep\n  epsilon: 1.5\n")
    assert _error(path).field == "experiment.epsilon"


def test_unknown_check(write_config):
    path = write_config("experiment:\n  kind: validate\n  checks: [gain_limit, no_such_check]\n")
    assert _error(path).field == "experiment.checks"


def test_sidecar_config_is_accepted(tmp_path, write_config):
    cfg = load_experiment_config(write_config("run:\n  run_id: again\n  seed: 5\n"))
    sidecar = tmp_path / "again.json"
    sidecar.write_text(json.dumps({"config": cfg.raw}), encoding="utf-8")
    rerun = load_experiment_config(str(sidecar))
    assert rerun.raw == cfg.raw
    assert rerun.seed == 5 and rerun.run_id == "again"


def test_sidecar_without_config(tmp_path):
    sidecar = tmp_path / "broken.json"
    sidecar.write_text(json.dumps({"ledger": []}), encoding="utf-8")
    assert _error(str(sidecar)).field == "config"


def test_load_yaml_lines(write_config):
    data, lines = load_yaml(write_config("run:\n  seed: 1\nnetwork:\n  noise: 0.0\n"))
    assert data["run"]["seed"] == 1
    assert lines == {"run": 1, "run.seed": 2, "network": 3, "network.noise": 4}


def test_defaults_cover_every_section():
    assert set(load_defaults()) == {
        "run", "experiment", "network", "sweep", "simulation", "quadrature", "output"
    }

from __future__ import annotations
import textwrap

import pytest

from clusternet.channel import BOUNDED, SINGULAR, PathLoss, RayleighPower
from clusternet.geometry import ClusterModel, MaternBall, ThomasGaussian
from clusternet.montecarlo import NetworkConfig
from clusternet.pgfl import QuadratureSpec


def network(
    kind: str = SINGULAR,
    *,
    parent_intensity: float = 1.0,
    mean_cluster_size: float = 2.0,
    scattering=None,
    threshold: float = 1.0,
    link_distance: float = 0.5,
    noise: float = 0.0,
    alpha: float = 4.0,
) -> NetworkConfig:
    return NetworkConfig(
        ClusterModel(parent_intensity, mean_cluster_size, scattering or ThomasGaussian(0.25)),
        PathLoss(kind, alpha),
        RayleighPower(1.0),
        threshold,
        link_distance,
        noise,
    )


@pytest.fixture
def make_network():
    return network


@pytest.fixture
def spec() -> QuadratureSpec:
    return QuadratureSpec(rel_tol=1e-6)


@pytest.fixture
def thomas_net() -> NetworkConfig:
    return network(SINGULAR)


@pytest.fixture
def bounded_net() -> NetworkConfig:
    return network(BOUNDED)


@pytest.fixture
def matern_net() -> NetworkConfig:
    return network(BOUNDED, scattering=MaternBall(0.6), link_distance=0.4)


@pytest.fixture
def write_config(tmp_path):
    """Write a dedented YAML config under tmp_path and return its path."""

    def _write(text: str, name: str = "config.yaml") -> str:
        path = tmp_path / name
        path.write_text(textwrap.dedent(text).lstrip(), encoding="utf-8")
        return str(path)

    return _write

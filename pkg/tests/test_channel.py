from __future__ import annotations

import numpy as np
import pytest
from scipy import integrate, special

from clusternet.channel import (
    BOUNDED,
    CLIPPED,
    SINGULAR,
    GeneralizedPareto,
    NakagamiPower,
    PathLoss,
    RayleighPower,
    c_alpha,
    fading_cdf,
    fading_fractional_moment,
    fading_laplace,
    pathloss_eval,
)
from clusternet.errors import DivergentMomentError, SingularPathLossError, UnsupportedOperationError


def _plane(pl: PathLoss) -> float:
    def fn(r: float) -> float:
        return 2.0 * np.pi * r * float(pl.radial(r))

    # the clipped law has a kink at distance 1
    return integrate.quad(fn, 0.0, 1.0)[0] + integrate.quad(fn, 1.0, np.inf)[0]


def test_c_alpha_at_four():
    assert c_alpha(4.0) == pytest.approx(np.pi ** 2 / 2.0, rel=1e-12)


@pytest.mark.parametrize("alpha", [3.0, 4.0, 5.5])
def test_plane_integrals(alpha):
    bounded = PathLoss(BOUNDED, alpha)
    clipped = PathLoss(CLIPPED, alpha)
    assert bounded.plane_integral() == pytest.approx(_plane(bounded), rel=1e-7)
    assert clipped.plane_integral() == pytest.approx(_plane(clipped), rel=1e-7)
    assert PathLoss(SINGULAR, alpha).plane_integral() == float("inf")


def test_tail_bound_covers_the_tail():
    pl = PathLoss(SINGULAR, 4.0)
    r = pl.radius_for_tail(1e-3)
    assert pl.tail_bound(r) <= 1e-3 * (1 + 1e-12)
    tail, _ = integrate.quad(lambda x: 2.0 * np.pi * x * float(pl.radial(x)), 2.0, np.inf)
    assert tail == pytest.approx(pl.tail_bound(2.0), rel=1e-8)


@pytest.mark.parametrize("kind", [BOUNDED, CLIPPED])
def test_ball_integral(kind):
    pl = PathLoss(kind, 4.0)
    for r in (0.5, 1.0, 3.0):
        expected = integrate.quad(lambda u: 2.0 * np.pi * u * float(pl.radial(u)), 0.0, r)[0]
        assert pl.ball_integral(r) == pytest.approx(expected, rel=1e-8)
    assert pl.ball_integral(0.0) == 0.0
    assert pl.ball_integral(50.0) == pytest.approx(pl.plane_integral(), rel=1e-3)
    assert PathLoss(SINGULAR, 4.0).ball_integral(1.0) == float("inf")
    assert PathLoss(BOUNDED, 4.0).ball_integral(1.0) == pytest.approx(np.pi ** 2 / 4.0)


def test_pathloss_shapes():
    assert PathLoss(BOUNDED, 4.0).radial(0.0) == 1.0
    assert PathLoss(CLIPPED, 4.0).radial(0.5) == 1.0
    assert PathLoss(CLIPPED, 4.0).radial(2.0) == pytest.approx(1.0 / 16.0)
    assert np.isinf(PathLoss(SINGULAR, 4.0).radial(0.0))
    assert PathLoss(SINGULAR, 4.0)(np.array([3.0, 4.0])) == pytest.approx(5.0 ** -4)


def test_pathloss_validation():
    with pytest.raises(ValueError):
        PathLoss("free-space", 4.0)
    with pytest.raises(ValueError):
        PathLoss(SINGULAR, 2.0)
    with pytest.raises(SingularPathLossError):
        pathloss_eval(PathLoss(SINGULAR, 4.0), (0.0, 0.0))
    assert pathloss_eval(PathLoss(BOUNDED, 4.0), (0.0, 0.0)) == 1.0


def test_rayleigh_moments():
    h = RayleighPower(2.0)
    assert h.mean == 0.5
    assert fading_laplace(h, 1.0) == pytest.approx(2.0 / 3.0)
    assert h.laplace_complement(1.0) == pytest.approx(1.0 / 3.0)
    assert h.fractional_moment(0.5) == pytest.approx(2.0 ** -0.5 * special.gamma(1.5))
    assert h.partial_mean(1e6) == pytest.approx(h.mean)
    with pytest.raises(DivergentMomentError):
        h.fractional_moment(-1.0)


def test_nakagami_one_is_rayleigh():
    s = np.array([0.0, 0.3, 2.0, 10.0])
    np.testing.assert_allclose(NakagamiPower(1, 1.0).laplace(s), RayleighPower(1.0).laplace(s))
    np.testing.assert_allclose(NakagamiPower(1, 1.0).cdf(s), RayleighPower(1.0).cdf(s))


def test_nakagami_moments():
    h = NakagamiPower(3, 2.0)
    y = np.linspace(0.0, 5.0, 7)
    np.testing.assert_allclose(h.cdf(y) + h.sf(y), 1.0)
    assert h.fractional_moment(1.0) == pytest.approx(2.0)
    assert h.partial_mean(1e6) == pytest.approx(2.0)
    assert h.laplace_complement(0.7) == pytest.approx(1.0 - h.laplace(0.7))
    with pytest.raises(DivergentMomentError):
        h.fractional_moment(-3.0)
    with pytest.raises(ValueError):
        NakagamiPower(1.5)


def test_pareto_law():
    h = GeneralizedPareto(k=0.5, sigma=1.0, theta=0.0)
    assert h.mean == pytest.approx(2.0)
    assert GeneralizedPareto(k=1.0).mean == float("inf")
    assert h.partial_mean(1e12) == pytest.approx(h.mean, rel=1e-5)
    assert h.fractional_moment(1.0) == pytest.approx(2.0, rel=1e-6)
    with pytest.raises(DivergentMomentError):
        h.fractional_moment(2.0)
    with pytest.raises(UnsupportedOperationError):
        h.laplace(1.0)


def test_scale_is_finite_for_every_law():
    assert RayleighPower(2.0).scale == pytest.approx(0.5)
    assert NakagamiPower(2, 3.0).scale == 3.0
    heavy = GeneralizedPareto(k=1.0, sigma=2.0, theta=0.5)
    assert heavy.mean == float("inf")
    assert heavy.scale == 2.5


def test_sampling_matches_mean():
    rng = np.random.default_rng(0)
    for h in (RayleighPower(2.0), NakagamiPower(2, 3.0)):
        assert h.sample(rng, 200_000).mean() == pytest.approx(h.mean, rel=0.02)


def test_fading_wrappers():
    h = RayleighPower(1.0)
    assert fading_cdf(h, 1.0) == pytest.approx(-np.expm1(-1.0))
    assert fading_cdf(h, np.array([0.0, 1.0])).shape == (2,)
    assert fading_fractional_moment(h, 0.5) == pytest.approx(special.gamma(1.5))
    assert fading_fractional_moment(h, -0.5) == pytest.approx(np.sqrt(np.pi))

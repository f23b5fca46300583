"""Channel laws: path loss g and power fading h."""

from .pathloss import BOUNDED, CLIPPED, SINGULAR, PathLoss, c_alpha, pathloss_eval
from .fading import (
    FadingModel,
    GeneralizedPareto,
    NakagamiPower,
    RayleighPower,
    fading_cdf,
    fading_fractional_moment,
    fading_laplace,
)

__all__ = [
    "BOUNDED",
    "CLIPPED",
    "SINGULAR",
    "PathLoss",
    "c_alpha",
    "pathloss_eval",
    "FadingModel",
    "GeneralizedPareto",
    "NakagamiPower",
    "RayleighPower",
    "fading_cdf",
    "fading_fractional_moment",
    "fading_laplace",
]

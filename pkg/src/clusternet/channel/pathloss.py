"""Path-loss laws.

All three kinds are isotropic, non-increasing in distance and integrable
outside any ball for α > 2. Vectorized evaluation (`radial`) returns +inf for
the singular law at zero distance; the scalar `pathloss_eval` refuses it.
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import ClassVar, Tuple

import numpy as np
from scipy import integrate

from ..errors import SingularPathLossError

SINGULAR = "singular"
BOUNDED = "bounded"
CLIPPED = "clipped"


def c_alpha(alpha: float) -> float:
    """(2π²/α)·csc(2π/α) = ∫(1+‖x‖^α)⁻¹dx."""
    return float(2.0 * np.pi ** 2 / alpha / np.sin(2.0 * np.pi / alpha))


@dataclass(frozen=True)
class PathLoss:
    kind: str
    alpha: float
    kinds: ClassVar[Tuple[str, ...]] = (SINGULAR, BOUNDED, CLIPPED)

    def __post_init__(self) -> None:
        if self.kind not in self.kinds:
            raise ValueError(f"Unknown path-loss kind: {self.kind}. Available: {list(self.kinds)}")
        if not self.alpha > 2:
            raise ValueError(f"path-loss exponent must be > 2, got {self.alpha}")

    @property
    def singular(self) -> bool:
        return self.kind == SINGULAR

    def radial(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=np.float64)
        a = self.alpha
        if self.kind == BOUNDED:
            return 1.0 / (1.0 + r ** a)
        with np.errstate(divide="ignore"):
            g = r ** (-a)
        if self.kind == CLIPPED:
            return np.minimum(1.0, g)
        return g

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return self.radial(np.hypot(x[..., 0], x[..., 1]))

    def plane_integral(self) -> float:
        """∫ g(x) dx over the plane (inf for the singular law)."""
        a = self.alpha
        if self.kind == BOUNDED:
            return c_alpha(a)
        if self.kind == CLIPPED:
            return float(np.pi + 2.0 * np.pi / (a - 2.0))
        return float("inf")

    def ball_integral(self, radius: float) -> float:
        """∫_{‖x‖≤radius} g(x) dx (inf for the singular law)."""
        a, r = self.alpha, float(radius)
        if r <= 0:
            return 0.0
        if self.kind == SINGULAR:
            return float("inf")
        if self.kind == CLIPPED:
            if r <= 1.0:
                return float(np.pi * r * r)
            return float(np.pi + 2.0 * np.pi * (1.0 - r ** (2.0 - a)) / (a - 2.0))
        value, _ = integrate.quad(lambda u: 2.0 * np.pi * u / (1.0 + u ** a), 0.0, r, limit=200)
        return float(value)

    def tail_bound(self, radius: float) -> float:
        """Upper bound on ∫_{‖x‖>radius} g(x) dx."""
        a = self.alpha
        if radius <= 0:
            return self.plane_integral()
        power = 2.0 * np.pi * radius ** (2.0 - a) / (a - 2.0)
        if self.kind == CLIPPED and radius < 1.0:
            return float(np.pi * (1.0 - radius ** 2) + 2.0 * np.pi / (a - 2.0))
        return float(power)

    def radius_for_tail(self, target: float) -> float:
        """Smallest radius >= 1 whose tail bound is <= target."""
        a = self.alpha
        r = (2.0 * np.pi / ((a - 2.0) * float(target))) ** (1.0 / (a - 2.0))
        return float(max(r, 1.0))


def pathloss_eval(pl: PathLoss, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if pl.singular and float(np.hypot(x[0], x[1])) == 0.0:
        raise SingularPathLossError("singular path loss is undefined at the origin")
    return float(pl(x))

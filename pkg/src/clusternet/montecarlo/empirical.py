"""Empirical distributions produced by the simulators."""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np
import pandas as pd
from scipy import stats


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Sample estimate with its standard error.

    `diverges` marks means that do not exist; `value` is then +inf.
    """

    value: float
    se: float
    trials: int
    radius: float
    diverges: bool = False

    def within(self, reference: float, n_se: float = 3.0, slack: float = 0.0) -> bool:
        return abs(self.value - reference) <= n_se * self.se + slack


@dataclass(frozen=True)
class EmpiricalDistribution:
    samples: np.ndarray
    tags: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        s = np.sort(np.asarray(self.samples, dtype=np.float64).ravel())
        if s.size == 0:
            raise ValueError("empirical distribution needs at least one sample")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def n(self) -> int:
        return int(self.samples.size)

    def ccdf(self, y):
        """P(X > y)."""
        y = np.asarray(y, dtype=np.float64)
        out = 1.0 - np.searchsorted(self.samples, y, side="right") / self.n
        return float(out) if out.ndim == 0 else out

    def standard_error(self, y):
        p = np.asarray(self.ccdf(y))
        out = np.sqrt(p * (1.0 - p) / self.n)
        return float(out) if out.ndim == 0 else out

    def ci_halfwidth(self, y, z: float = 1.96):
        out = z * np.asarray(self.standard_error(y))
        return float(out) if out.ndim == 0 else out

    def quantile(self, q):
        out = np.quantile(self.samples, q)
        return float(out) if np.ndim(out) == 0 else out

    @property
    def median(self) -> float:
        return float(np.median(self.samples))

    def mean(self) -> Tuple[float, float]:
        """Sample mean and its standard error."""
        return float(self.samples.mean()), float(self.samples.std(ddof=1) / np.sqrt(self.n))

    def tail_slope(self, p_hi: float = 0.1, p_lo: float = 0.01) -> float:
        """Least-squares slope of log CCDF against log y where p_lo ≤ CCDF ≤ p_hi."""
        p_lo = max(p_lo, 10.0 / self.n)
        ranks = np.arange(self.n, 0, -1) / self.n  # CCDF just below each order statistic
        keep = (ranks <= p_hi) & (ranks >= p_lo) & (self.samples > 0)
        if np.count_nonzero(keep) < 3:
            raise ValueError(f"too few samples in the tail window [{p_lo:g}, {p_hi:g}]")
        slope, _ = np.polyfit(np.log(self.samples[keep]), np.log(ranks[keep]), 1)
        return float(slope)

    def ks_test(self, other: "EmpiricalDistribution") -> Tuple[float, float]:
        """Two-sample Kolmogorov-Smirnov statistic and p-value."""
        res = stats.ks_2samp(self.samples, other.samples)
        return float(res.statistic), float(res.pvalue)

    def to_frame(self, ys) -> pd.DataFrame:
        ys = np.asarray(ys, dtype=np.float64)
        return pd.DataFrame(
            {"y": ys, "ccdf": self.ccdf(ys), "ci_halfwidth": self.ci_halfwidth(ys)}
        )

"""Interference CCDF at the receiver, Monte Carlo with analytic bounds.

The sweep runs over the interference level y (`sweep.parameter: level`). Each
series is simulated once; every level then reads the same empirical
distribution, so levels share one seed per series.
"""

from __future__ import annotations
import logging
from typing import Dict, List

import numpy as np

from ..channel.pathloss import SINGULAR
from ..errors import DivergentMeanError, DivergentMomentError
from ..metrics.interference import ccdf_bounds, mean_interference, tail_constants
from ..montecarlo.config import INTERFERENCE
from ..montecarlo.empirical import EmpiricalDistribution
from ..montecarlo.simulate import (
    draw_patterns,
    empirical_mean_interference,
    simulate_interference,
)
from .base import (
    ANALYTIC,
    BOUND_LOWER,
    BOUND_UPPER,
    MONTECARLO,
    Experiment,
    ExperimentConfig,
    ExperimentOutcome,
    ResultRow,
)
from .sweep import progress, series_seed

log = logging.getLogger("clusternet.experiments")


class InterferenceCcdf(Experiment):
    name = "ccdf"
    sweep_parameters = ("level",)

    def run(self, cfg: ExperimentConfig) -> ExperimentOutcome:
        spec = cfg.quadrature
        rows: List[ResultRow] = []
        dists: Dict[int, EmpiricalDistribution] = {}
        bounds_off: Dict[int, str] = {}
        diagnostics: Dict[str, Dict[str, float]] = {}

        for pt in progress(cfg, self.name):
            s, i, y, net = pt.series_index, pt.index, pt.value, pt.network
            conditioned = bool(cfg.option("conditioned", pt.series, True))
            label = pt.series.label or str(s)

            def row(metric: str, method: str, value: float, unc: float = 0.0) -> ResultRow:
                return ResultRow(y, pt.metric(metric), method, float(value), float(unc), s, i)

            if s not in dists:
                sim = cfg.simulation.with_updates(seed=series_seed(cfg.seed, s))
                dists[s] = simulate_interference(net, sim, conditioned)
                diagnostics[label] = self._series_summary(cfg, pt, dists[s], conditioned)
            dist = dists[s]
            rows.append(row("ccdf", MONTECARLO, dist.ccdf(y), dist.ci_halfwidth(y)))

            if cfg.option("bounds", pt.series, True) and conditioned and s not in bounds_off:
                try:
                    b = ccdf_bounds(net, y, spec)
                except DivergentMomentError as e:
                    bounds_off[s] = str(e)
                    log.warning(f"ccdf bounds skipped for series {label}: {e}")
                else:
                    rows.append(row("ccdf", BOUND_LOWER, b.lower))
                    rows.append(row("ccdf", BOUND_UPPER, b.upper))

        patterns = []
        if cfg.write_patterns > 0:
            conditioned = bool(cfg.option("conditioned", cfg.series[0], True))
            sim = cfg.simulation.with_updates(seed=series_seed(cfg.seed, 0))
            patterns = draw_patterns(
                cfg.network, sim, cfg.write_patterns, conditioned, INTERFERENCE
            )
        rows.extend(self._mean_rows(cfg))
        return ExperimentOutcome(rows, {"series": diagnostics}, patterns=patterns)

    def _series_summary(self, cfg, pt, dist: EmpiricalDistribution, conditioned: bool) -> dict:
        net = pt.network
        out = {"radius": float(dist.tags["radius"]), "trials": dist.n, "median": dist.median}
        try:
            out["tail_slope"] = dist.tail_slope()
        except ValueError as e:
            log.info(f"tail slope unavailable: {e}")
        if net.pathloss.kind == SINGULAR and conditioned:
            try:
                out["theta1"], out["theta2"] = tail_constants(net)
            except DivergentMomentError as e:
                log.info(f"tail constants unavailable: {e}")
        return out

    def _mean_rows(self, cfg: ExperimentConfig) -> List[ResultRow]:
        """Mean interference per series (param = NaN, index after the last level)."""
        rows = []
        after = len(cfg.sweep)
        for s, series in enumerate(cfg.series):
            if not cfg.option("report_mean", series, False):
                continue
            conditioned = bool(cfg.option("conditioned", series, True))
            net = series.network
            try:
                value = mean_interference(net, conditioned, cfg.quadrature)
                rows.append(
                    ResultRow(np.nan, series.metric("mean_interference"), ANALYTIC, value,
                              cfg.quadrature.tolerance(value), s, after)
                )
            except DivergentMeanError as e:
                log.warning(f"analytic mean skipped for series {series.label}: {e}")
            sim = cfg.simulation.with_updates(seed=series_seed(cfg.seed, s))
            est = empirical_mean_interference(net, sim, conditioned)
            if not est.diverges:
                rows.append(
                    ResultRow(np.nan, series.metric("mean_interference"), MONTECARLO, est.value,
                              est.se, s, after)
                )
        return rows

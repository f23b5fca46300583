"""Clustering gain G(R) and the threshold intensity λ* along a sweep.

`experiment.quantity` selects what each point reports:
- gain: G at the point, with the η-form of G as a second row when available
- lambda_star: λ*(R, T), which ignores the cluster intensities

With a link_distance sweep and `crossover: true`, the R* where G crosses 1 is
appended per series (param = R*, index after the last point).
"""

from __future__ import annotations
import logging
from typing import Dict, List

import numpy as np

from ..metrics.gain import gain_crossover, gain_split, lambda_star
from .base import ANALYTIC, Experiment, ExperimentConfig, ExperimentOutcome, ResultRow
from .sweep import progress

log = logging.getLogger("clusternet.experiments")

QUANTITIES = ("gain", "lambda_star")


class GainCurve(Experiment):
    name = "gain-curve"

    def run(self, cfg: ExperimentConfig) -> ExperimentOutcome:
        spec = cfg.quadrature
        rows: List[ResultRow] = []
        crossings: Dict[str, float] = {}
        for pt in progress(cfg, self.name):
            net, s, i, x = pt.network, pt.series_index, pt.index, pt.value
            quantity = cfg.option("quantity", pt.series, "gain")
            if quantity == "lambda_star":
                value = lambda_star(net, spec)
                rows.append(ResultRow(x, pt.metric("lambda_star"), ANALYTIC, value,
                                      spec.tolerance(value), s, i))
                continue
            split = gain_split(net, spec)
            rows.append(ResultRow(x, pt.metric("gain"), ANALYTIC, split.gain,
                                  spec.tolerance(split.gain), s, i))
            if np.isfinite(split.gain_eta):
                rows.append(ResultRow(x, pt.metric("gain_eta"), ANALYTIC, split.gain_eta,
                                      spec.tolerance(split.gain_eta), s, i))
            if not split.agree and np.isfinite(split.gain_eta):
                log.warning(f"gain forms disagree at {cfg.sweep.parameter}={x:g}: "
                            f"{split.gain:.8g} vs {split.gain_eta:.8g}")

        if cfg.sweep.parameter == "link_distance" and cfg.option("crossover", None, True):
            rows.extend(self._crossings(cfg, crossings))
        return ExperimentOutcome(rows, {"crossover": crossings})

    def _crossings(self, cfg: ExperimentConfig, found: Dict[str, float]) -> List[ResultRow]:
        rows = []
        lo, hi = min(cfg.sweep.values), max(cfg.sweep.values)
        after = len(cfg.sweep)
        for s, series in enumerate(cfg.series):
            if cfg.option("quantity", series, "gain") != "gain":
                continue
            r_star = gain_crossover(series.network, lo, hi, cfg.quadrature)
            if r_star is None:
                continue
            found[series.label or str(s)] = r_star
            log.info(f"series {series.label or s}: G(R) = 1 at R = {r_star:.6g}")
            rows.append(ResultRow(r_star, series.metric("gain_crossover"), ANALYTIC, r_star,
                                  max(1e-6 * hi, 1e-12), s, after))
        return rows

"""Frequency hopping against direct sequence as the spreading gain M grows."""

from __future__ import annotations
import logging
from typing import List

import numpy as np

from ..metrics.capacity import spread_spectrum_compare
from .base import ANALYTIC, Experiment, ExperimentConfig, ExperimentOutcome, ResultRow
from .sweep import progress

log = logging.getLogger("clusternet.experiments")


class SpreadSpectrum(Experiment):
    name = "spread-spectrum"
    sweep_parameters = ("spreading",)

    def run(self, cfg: ExperimentConfig) -> ExperimentOutcome:
        spec = cfg.quadrature
        rows: List[ResultRow] = []
        for pt in progress(cfg, self.name):
            s, i, m = pt.series_index, pt.index, pt.value
            eps = float(cfg.option("epsilon", pt.series, 0.01))
            cmp = spread_spectrum_compare(pt.network, eps, m, spec)
            rows.append(ResultRow(m, pt.metric("capacity_fh"), ANALYTIC, cmp.frequency_hopping,
                                  spec.tolerance(cmp.frequency_hopping), s, i))
            rows.append(ResultRow(m, pt.metric("capacity_ds"), ANALYTIC, cmp.direct_sequence,
                                  spec.tolerance(cmp.direct_sequence), s, i))
            if np.isfinite(cmp.log_ratio):
                rows.append(ResultRow(m, pt.metric("log_ratio"), ANALYTIC, cmp.log_ratio, 0, s, i))
            log.info(f"M={m:g}: FH {cmp.frequency_hopping:.6g}, DS {cmp.direct_sequence:.6g}")
        expected = {
            series.label or str(k): 1.0 - 2.0 / series.network.pathloss.alpha
            for k, series in enumerate(cfg.series)
        }
        return ExperimentOutcome(rows, {"expected_log_ratio": expected})

"""Transmission capacity along a sweep (typically α or ε).

Per point:
- capacity_poisson: C_p(ε, T)
- capacity: C(ε, T) = C_p when ε is below the threshold 1 − e^{−ρ(T)}
- capacity_constrained: closed-form bounds and the value found by inverting γ(c̄) = ε
- capacity_first_order: the small-ε approximation of the constrained capacity
- capacity_search (`search: true`): best admissible λ over (λ_p, c̄)
"""

from __future__ import annotations
import logging
from typing import Any, Dict, List

from ..metrics.capacity import transmission_capacity, unconstrained_capacity_search
from .base import (
    ANALYTIC,
    BOUND_LOWER,
    BOUND_UPPER,
    Experiment,
    ExperimentConfig,
    ExperimentOutcome,
    ResultRow,
)
from .sweep import SweepPoint, progress

log = logging.getLogger("clusternet.experiments")


def point_epsilon(cfg: ExperimentConfig, pt: SweepPoint) -> float:
    if cfg.sweep is not None and cfg.sweep.parameter == "epsilon":
        return float(pt.value)
    return float(cfg.option("epsilon", pt.series, 0.01))


class CapacitySweep(Experiment):
    name = "capacity-sweep"

    def run(self, cfg: ExperimentConfig) -> ExperimentOutcome:
        spec = cfg.quadrature
        rows: List[ResultRow] = []
        points: List[Dict[str, Any]] = []
        for pt in progress(cfg, self.name):
            s, i, x = pt.series_index, pt.index, pt.value
            eps = point_epsilon(cfg, pt)

            def row(metric: str, method: str, value: float, unc: float = 0.0) -> ResultRow:
                return ResultRow(x, pt.metric(metric), method, float(value), float(unc), s, i)

            res = transmission_capacity(pt.network, eps, spec, with_constrained=True)
            c = res.constrained
            rows.append(row("capacity_poisson", ANALYTIC, res.poisson, spec.tolerance(res.poisson)))
            if res.valid:
                rows.append(row("capacity", ANALYTIC, res.unconstrained))
            rows.append(row("capacity_constrained", BOUND_LOWER, c.lower))
            rows.append(row("capacity_constrained", BOUND_UPPER, c.upper))
            rows.append(row("capacity_constrained", ANALYTIC, c.exact, spec.tolerance(c.exact)))
            rows.append(row("capacity_first_order", ANALYTIC, c.first_order))
            if cfg.option("search", pt.series, False):
                found = unconstrained_capacity_search(pt.network, eps, spec)
                rows.append(row("capacity_search", ANALYTIC, found.intensity))
            if not c.lower <= c.exact <= c.upper:
                log.warning(f"constrained capacity {c.exact:.6g} outside "
                            f"[{c.lower:.6g}, {c.upper:.6g}] at {cfg.sweep.parameter}={x:g}")
            points.append(
                {
                    "series": s,
                    "index": i,
                    "epsilon": eps,
                    "rho": res.rho,
                    "threshold_epsilon": res.threshold_epsilon,
                    "valid": res.valid,
                    "cluster_size_at_outage": c.mean_cluster_size,
                }
            )
        return ExperimentOutcome(rows, {"points": points})

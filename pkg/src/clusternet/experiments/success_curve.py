"""Success probability of the typical link along a sweep.

Methods (`experiment.methods`):
- analytic: Rayleigh closed form (FixedCount and Nakagami variants when configured)
- poisson: P_p(λ) at the same total intensity
- bounds: closed-form lower / upper / tight upper bounds
- montecarlo: Palm simulation with its standard error
"""

from __future__ import annotations
import logging
from typing import List, Optional, Tuple

from ..channel.fading import NakagamiPower
from ..geometry.models import FixedCount
from ..metrics.beta import poisson_success
from ..metrics.success import (
    success_bounds,
    success_probability_fixed,
    success_probability_nakagami,
    success_terms,
)
from ..montecarlo.config import NetworkConfig
from ..montecarlo.simulate import draw_patterns, simulate_success_probability
from ..pgfl.quadrature import QuadratureSpec
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
from .sweep import progress

log = logging.getLogger("clusternet.experiments")


def analytic_success(
    net: NetworkConfig, spec: QuadratureSpec, nakagami_m: Optional[int] = None
) -> Tuple[float, float, str]:
    """(value, absolute error estimate, formula tag) for one network."""
    if nakagami_m is not None or isinstance(net.fading, NakagamiPower):
        value = success_probability_nakagami(net, spec, nakagami_m)
        return value, spec.tolerance(value), "nakagami"
    if isinstance(net.cluster.count_law, FixedCount):
        value = success_probability_fixed(net, spec)
        return value, spec.tolerance(value), "fixed"
    terms = success_terms(net, spec)
    return terms.value, terms.error * terms.noise_factor, "rayleigh"


class SuccessCurve(Experiment):
    name = "success-curve"

    def run(self, cfg: ExperimentConfig) -> ExperimentOutcome:
        spec = cfg.quadrature
        rows: List[ResultRow] = []
        formulas = {}
        for pt in progress(cfg, self.name):
            net, s, i, x = pt.network, pt.series_index, pt.index, pt.value
            methods = cfg.option("methods", pt.series, ["analytic"])

            def row(metric: str, method: str, value: float, unc: float = 0.0) -> ResultRow:
                return ResultRow(x, pt.metric(metric), method, float(value), float(unc), s, i)

            if "analytic" in methods:
                m = cfg.option("nakagami_m", pt.series)
                value, err, formula = analytic_success(net, spec, m)
                formulas[pt.series.label or str(s)] = formula
                rows.append(row("success", ANALYTIC, value, err))
            if "poisson" in methods:
                pp = poisson_success(
                    net.pathloss, net.threshold, net.link_distance, net.cluster.intensity, spec
                )
                rows.append(row("poisson_success", ANALYTIC, pp))
            if "bounds" in methods:
                b = success_bounds(net, spec)
                rows.append(row("success", BOUND_LOWER, b.lower))
                rows.append(row("success", BOUND_UPPER, b.upper))
                rows.append(row("success_tight", BOUND_UPPER, b.tight_upper))
            if "montecarlo" in methods:
                est = simulate_success_probability(net, cfg.simulation.with_updates(seed=pt.seed))
                rows.append(row("success", MONTECARLO, est.value, est.se))
            log.info(f"{self.name} {cfg.sweep.parameter}={x:.6g} series={s} done")

        patterns = []
        if cfg.write_patterns > 0:
            patterns = draw_patterns(cfg.network, cfg.simulation, cfg.write_patterns)
        return ExperimentOutcome(rows, {"formulas": formulas}, patterns=patterns)

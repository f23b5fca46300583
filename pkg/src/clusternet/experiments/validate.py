"""Invariant suite behind `clusternet validate`.

Each check builds its own reference network, measures one property and
returns a ledger entry:

    {"name", "passed", "value", "reference", "detail"}

`experiment.checks` restricts the run to a subset (default: all). Simulation
sizes come from the `simulation` section, quadrature tolerances from
`quadrature`; statistical checks use fixed bands in standard errors.
"""

from __future__ import annotations
import logging
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..channel.fading import RayleighPower
from ..channel.pathloss import BOUNDED, SINGULAR, PathLoss
from ..geometry.models import ClusterModel, MaternBall, Scattering, ThomasGaussian
from ..metrics.beta import poisson_beta_integral, poisson_success
from ..metrics.capacity import (
    constrained_capacity,
    spread_spectrum_compare,
    transmission_capacity,
    unconstrained_capacity_search,
)
from ..metrics.gain import (
    clustering_gain,
    gain_crossover,
    gain_monotonicity_check,
    gain_split,
    lambda_star,
)
from ..metrics.interference import ccdf_bounds, tail_constants
from ..metrics.success import success_bounds, success_probability, success_probability_nakagami
from ..montecarlo.config import NetworkConfig, SimSpec
from ..montecarlo.simulate import (
    simulate_interference,
    simulate_success_probability,
    simulate_truncation_audit,
)
from ..pgfl.quadrature import QuadratureSpec
from .base import ANALYTIC, MONTECARLO, Experiment, ExperimentConfig, ExperimentOutcome, ResultRow
from .sweep import point_seed

log = logging.getLogger("clusternet.experiments")

Entry = Dict[str, Any]
Check = Callable[[QuadratureSpec, SimSpec], Entry]

BOUND_SLACK = 1e-8
MC_BAND = 3.0
# λ*(0, 0.5) for bounded α = 4 and Thomas σ = 0.25
LAMBDA_STAR_ANCHOR = 2.02
# G(0) and the crossing of 1 at λ_p = 0.125, c̄ = 6 (λ = 0.75), same channel
GAIN_ANCHOR = (0.25, 1.2)
# where the Matérn (a = 0.6, λ_p = 1, c̄ = 2) success curve meets the PPP of intensity 2
SUCCESS_CROSSOVER_ANCHOR = 0.8
ANCHOR_BAND = (0.1, 0.15)
# Thomas/Matérn × singular/bounded × two link distances
MC_GRID_DISTANCES = (0.3, 0.6)


def reference_network(
    kind: str = SINGULAR,
    alpha: float = 4.0,
    *,
    sigma: float = 0.25,
    scattering: Optional[Scattering] = None,
    parent_intensity: float = 1.0,
    mean_cluster_size: float = 2.0,
    threshold: float = 1.0,
    link_distance: float = 0.5,
) -> NetworkConfig:
    """Thomas clusters with Rayleigh fading, the setting of most checks."""
    return NetworkConfig(
        ClusterModel(
            parent_intensity, mean_cluster_size, scattering or ThomasGaussian(sigma)
        ),
        PathLoss(kind, alpha),
        RayleighPower(1.0),
        threshold,
        link_distance,
    )


def entry(name: str, passed: bool, value: Any, reference: Any, detail: str = "") -> Entry:
    return {
        "name": name,
        "passed": bool(passed),
        "value": value,
        "reference": reference,
        "detail": detail,
    }


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b) if b != 0 else abs(a)


def check_poisson_closed_form(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    pl = PathLoss(SINGULAR, 4.0)
    quad = poisson_beta_integral(pl, 1.0, 1.0, spec, closed_form=False)
    ref = np.pi ** 2 / 2.0
    worst = max(
        _rel(poisson_success(pl, 1.0, 1.0, lam, spec, closed_form=False), np.exp(-lam * ref))
        for lam in (0.5, 1.0, 2.0)
    )
    return entry(
        "poisson_closed_form",
        _rel(quad, ref) <= 1e-4 and worst <= 1e-4,
        quad,
        ref,
        f"beta_I by quadrature; worst P_p relative gap {worst:.2e}",
    )


def check_bound_ordering(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    worst = np.inf
    where = ""
    for r in (0.25, 0.5, 1.0, 2.0):
        for cbar in (0.5, 1.0, 2.0, 4.0):
            net = reference_network(link_distance=r, mean_cluster_size=cbar)
            b = success_bounds(net, spec)
            p = success_probability(net, spec)
            gap = min(p - b.lower, b.tight_upper - p, b.upper - b.tight_upper)
            if gap < worst:
                worst, where = gap, f"R={r:g}, c={cbar:g}"
    return entry(
        "bound_ordering",
        worst >= -BOUND_SLACK,
        float(worst),
        -BOUND_SLACK,
        f"smallest gap in lower <= success <= tight_upper <= upper at {where}",
    )


def check_ppp_limit(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    net = reference_network(BOUNDED, parent_intensity=100.0, mean_cluster_size=1e-2)
    p = success_probability(net, spec)
    pp = poisson_success(net.pathloss, net.threshold, net.link_distance, 1.0, spec)
    return entry("ppp_limit", _rel(p, pp) <= 1e-2, p, pp, "c=1e-2 at total intensity 1")


def check_gain_limit(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    g = clustering_gain(reference_network(BOUNDED, mean_cluster_size=1e-3), spec)
    return entry("gain_limit", abs(g - 1.0) <= 1e-2, g, 1.0, "G at c=1e-3")


def check_gain_forms(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    split = gain_split(reference_network(BOUNDED, threshold=0.5, link_distance=1.0), spec)
    return entry("gain_forms", split.agree, split.gain_eta, split.gain, "eta form of G")


def check_lambda_star(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    value = lambda_star(reference_network(BOUNDED, threshold=0.5, link_distance=0.0), spec)
    return entry(
        "lambda_star",
        abs(value - LAMBDA_STAR_ANCHOR) <= 0.03,
        value,
        LAMBDA_STAR_ANCHOR,
        "R=0, T=0.5",
    )


def check_gain_anchor(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    net = reference_network(
        BOUNDED,
        parent_intensity=0.125,
        mean_cluster_size=6.0,
        threshold=0.5,
        link_distance=0.0,
    )
    g0 = clustering_gain(net, spec)
    r_star = gain_crossover(net, 0.5, 2.0, spec)
    g_ref, r_ref = GAIN_ANCHOR
    g_band, r_band = ANCHOR_BAND
    crossed = r_star is not None and abs(r_star - r_ref) <= r_band
    return entry(
        "gain_anchor",
        abs(g0 - g_ref) <= g_band and crossed,
        [g0, r_star],
        [g_ref, r_ref],
        "G(0) and R* for lambda_p=0.125, c=6, T=0.5",
    )


def check_success_crossover(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    net = reference_network(
        scattering=MaternBall(0.6), parent_intensity=1.0, mean_cluster_size=2.0, threshold=0.02
    )
    r_star = gain_crossover(net, 0.4, 1.5, spec)
    _, band = ANCHOR_BAND
    return entry(
        "success_crossover",
        r_star is not None and abs(r_star - SUCCESS_CROSSOVER_ANCHOR) <= band,
        r_star,
        SUCCESS_CROSSOVER_ANCHOR,
        "Matern a=0.6 against the PPP of intensity 2, T=0.02",
    )


def check_gain_monotonicity(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    base = reference_network(BOUNDED, threshold=0.5, link_distance=0.0)
    star = lambda_star(base, spec)
    results = []
    for factor in (0.5, 2.0):
        net = base.with_cluster(parent_intensity=factor * star, mean_cluster_size=1.0)
        results.append(gain_monotonicity_check(net, spec).consistent)
    return entry(
        "gain_monotonicity",
        all(results),
        star,
        star,
        "sign of dG/dc at 0.5 and 2 times lambda*",
    )


def check_nakagami_rayleigh(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    net = reference_network(mean_cluster_size=5.0)
    ray = success_probability(net, spec)
    naka = success_probability_nakagami(net, spec, 1)
    return entry("nakagami_rayleigh", _rel(naka, ray) <= 1e-4, naka, ray, "m=1")


def success_grid() -> List[NetworkConfig]:
    nets = []
    for scattering in (ThomasGaussian(0.25), MaternBall(0.6)):
        for kind in (SINGULAR, BOUNDED):
            for r in MC_GRID_DISTANCES:
                nets.append(
                    reference_network(
                        kind,
                        scattering=scattering,
                        parent_intensity=0.25,
                        mean_cluster_size=2.0,
                        link_distance=r,
                    )
                )
    return nets


def check_success_montecarlo(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    misses, worst = [], 0.0
    grid = success_grid()
    for k, net in enumerate(grid):
        ref = success_probability(net, spec)
        est = simulate_success_probability(net, sim.with_updates(seed=point_seed(sim.seed, k, 0)))
        score = abs(est.value - ref) / est.se if est.se > 0 else abs(est.value - ref)
        worst = max(worst, score)
        if not est.within(ref, MC_BAND, spec.tolerance(ref)):
            name = type(net.cluster.scattering).__name__
            misses.append(f"{name}/{net.pathloss.kind}/R={net.link_distance:g}")
    return entry(
        "success_montecarlo",
        not misses,
        worst,
        MC_BAND,
        f"largest gap in standard errors over {len(grid)} configs, trials={sim.trials}; "
        "misses: " + (", ".join(misses) or "none"),
    )


def check_ccdf_sandwich(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    net = reference_network(
        BOUNDED, parent_intensity=2.0, mean_cluster_size=3.0, link_distance=0.3
    )
    dist = simulate_interference(net, sim, True)
    ys = np.geomspace(max(dist.quantile(0.05), 1e-6), dist.quantile(0.99), 10)
    misses = []
    for y in ys:
        b = ccdf_bounds(net, float(y), spec)
        p, band = dist.ccdf(float(y)), MC_BAND * dist.standard_error(float(y))
        if not b.lower - band <= p <= b.upper + band:
            misses.append(f"y={y:.4g}")
    return entry(
        "ccdf_sandwich",
        not misses,
        len(misses),
        0,
        "levels outside the bounds: " + (", ".join(misses) or "none"),
    )


def check_truncation_audit(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    net = reference_network(BOUNDED, parent_intensity=0.25, link_distance=0.6)
    audit = simulate_truncation_audit(net, sim)
    return entry(
        "truncation_audit",
        audit.passed,
        audit.shift,
        audit.outer.se,
        f"R_sim {audit.inner.radius:.4g} against {audit.outer.radius:.4g}, "
        f"{audit.flips} flipped trials",
    )


def check_tail_slope(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    net = reference_network(
        SINGULAR, parent_intensity=2.0, mean_cluster_size=3.0, link_distance=0.3
    )
    slope = simulate_interference(net, sim, True).tail_slope(1e-2, 1e-3)
    ref = -2.0 / net.pathloss.alpha
    return entry("tail_slope", abs(slope - ref) <= 0.05, slope, ref, "log-log CCDF, top decade")


def check_tail_constant(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    net = reference_network(link_distance=1.0)
    theta1, _ = tail_constants(net)
    y = 1e4 * net.link_gain
    scaled = ccdf_bounds(net, y, spec).lower * y ** (2.0 / net.pathloss.alpha)
    return entry("tail_constant", _rel(scaled, theta1) <= 0.05, scaled, theta1, f"y={y:g}")


def check_worker_determinism(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    net = reference_network()
    small = sim.with_updates(trials=min(sim.trials, 4000), batch_size=500)
    one = simulate_interference(net, small.with_updates(workers=1), True).samples
    many = simulate_interference(net, small.with_updates(workers=4), True).samples
    same = bool(np.array_equal(one, many))
    return entry("worker_determinism", same, int(same), 1, "1 against 4 workers")


def check_capacity_bounds(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    bad = []
    for alpha in (3.0, 3.5, 4.0, 4.5, 5.0):
        c = constrained_capacity(reference_network(alpha=alpha, link_distance=1.0), 0.1, 1.0, spec)
        tol = 1.0 + spec.rel_tol
        if not (c.lower <= c.exact * tol and c.exact <= c.upper * tol):
            bad.append(f"alpha={alpha:g}")
    return entry(
        "capacity_bounds",
        not bad,
        len(bad),
        0,
        "exact constrained capacity outside its bounds: " + (", ".join(bad) or "none"),
    )


def check_capacity_first_order(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    c = constrained_capacity(reference_network(link_distance=1.0), 1e-3, 1.0, spec)
    return entry(
        "capacity_first_order", _rel(c.first_order, c.exact) <= 2e-2, c.first_order, c.exact,
        "eps=1e-3",
    )


def check_capacity_equality(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    net = reference_network(link_distance=1.0)
    worst, detail = 0.0, []
    for eps in (1e-3, 1e-2):
        res = transmission_capacity(net, eps, spec)
        if not res.valid:
            detail.append(f"eps={eps:g} above threshold {res.threshold_epsilon:.3g}")
            continue
        ratio = unconstrained_capacity_search(net, eps, spec).ratio
        worst = max(worst, abs(ratio - 1.0))
        detail.append(f"eps={eps:g}: ratio {ratio:.5f}")
    complete = all("ratio" in d for d in detail)
    return entry(
        "capacity_equality", complete and worst <= 1e-2, worst, 0.0, "; ".join(detail)
    )


def check_spread_spectrum(spec: QuadratureSpec, sim: SimSpec) -> Entry:
    net = reference_network(link_distance=1.0)
    ratios = [spread_spectrum_compare(net, 0.01, m, spec).log_ratio for m in (4.0, 16.0, 64.0)]
    return entry(
        "spread_spectrum",
        all(0.4 <= r <= 0.6 for r in ratios),
        [float(r) for r in ratios],
        1.0 - 2.0 / net.pathloss.alpha,
        "ln(C_FH/C_DS)/ln M for M = 4, 16, 64",
    )


CHECKS: Dict[str, Check] = {
    "poisson_closed_form": check_poisson_closed_form,
    "bound_ordering": check_bound_ordering,
    "ppp_limit": check_ppp_limit,
    "gain_limit": check_gain_limit,
    "gain_forms": check_gain_forms,
    "lambda_star": check_lambda_star,
    "gain_anchor": check_gain_anchor,
    "success_crossover": check_success_crossover,
    "gain_monotonicity": check_gain_monotonicity,
    "nakagami_rayleigh": check_nakagami_rayleigh,
    "success_montecarlo": check_success_montecarlo,
    "ccdf_sandwich": check_ccdf_sandwich,
    "truncation_audit": check_truncation_audit,
    "tail_slope": check_tail_slope,
    "tail_constant": check_tail_constant,
    "worker_determinism": check_worker_determinism,
    "capacity_bounds": check_capacity_bounds,
    "capacity_first_order": check_capacity_first_order,
    "capacity_equality": check_capacity_equality,
    "spread_spectrum": check_spread_spectrum,
}
MONTECARLO_CHECKS = (
    "success_montecarlo",
    "ccdf_sandwich",
    "truncation_audit",
    "tail_slope",
    "worker_determinism",
)


def list_checks() -> List[str]:
    return list(CHECKS)


def run_checks(
    names: Optional[List[str]], spec: QuadratureSpec, sim: SimSpec, seed: int = 0
) -> List[Entry]:
    selected = list(CHECKS) if not names else list(names)
    ledger = []
    for k, name in enumerate(selected):
        if name not in CHECKS:
            raise KeyError(f"Unknown check: {name}. Available: {list_checks()}")
        result = CHECKS[name](spec, sim.with_updates(seed=point_seed(seed, 0, k)))
        log.info(f"check {name}: {'pass' if result['passed'] else 'FAIL'} ({result['detail']})")
        ledger.append(result)
    return ledger


class Validate(Experiment):
    name = "validate"
    needs_sweep = False

    def run(self, cfg: ExperimentConfig) -> ExperimentOutcome:
        ledger = run_checks(cfg.option("checks"), cfg.quadrature, cfg.simulation, cfg.seed)
        rows = []
        for k, e in enumerate(ledger):
            method = MONTECARLO if e["name"] in MONTECARLO_CHECKS else ANALYTIC
            value = 1.0 if e["passed"] else 0.0
            rows.append(ResultRow(np.nan, e["name"], method, value, 0.0, 0, k))
        failed = [e["name"] for e in ledger if not e["passed"]]
        return ExperimentOutcome(rows, {"failed": failed}, ledger=ledger)

"""Monte Carlo oracle for interference, outage and void probabilities."""

from .config import (
    INTERFERENCE,
    SUCCESS,
    NetworkConfig,
    SimSpec,
    solve_simulation_radius,
    worker_count,
)
from .empirical import EmpiricalDistribution, MonteCarloEstimate
from .simulate import (
    TruncationAudit,
    draw_patterns,
    empirical_mean_interference,
    simulate_interference,
    simulate_success_probability,
    simulate_truncation_audit,
    simulate_void_probability,
)

__all__ = [
    "INTERFERENCE",
    "SUCCESS",
    "NetworkConfig",
    "SimSpec",
    "solve_simulation_radius",
    "worker_count",
    "EmpiricalDistribution",
    "MonteCarloEstimate",
    "TruncationAudit",
    "draw_patterns",
    "empirical_mean_interference",
    "simulate_interference",
    "simulate_success_probability",
    "simulate_truncation_audit",
    "simulate_void_probability",
]

"""Network metrics of the typical link: success, interference, gain and capacity."""

from .beta import (
    BetaProfile,
    BetaSummary,
    beta,
    beta_fixed,
    beta_square_integral,
    beta_summary,
    poisson_beta_integral,
    poisson_success,
)
from .success import (
    SuccessBounds,
    SuccessTerms,
    success_bounds,
    success_probability,
    success_probability_fixed,
    success_probability_nakagami,
    success_terms,
)
from .interference import (
    CcdfBoundPair,
    ccdf_bounds,
    ds_cdma_outage_scaling,
    mean_interference,
    mean_interference_thomas,
    tail_constants,
)
from .gain import (
    GainSplit,
    MonotonicityLedger,
    cluster_factor_limit,
    clustering_gain,
    gain_crossover,
    gain_monotonicity_check,
    gain_split,
    lambda_star,
)
from .capacity import (
    CapacityResult,
    CapacitySearch,
    ConstrainedCapacity,
    SpreadSpectrumComparison,
    cluster_size_for_outage,
    constrained_capacity,
    poisson_capacity,
    spread_spectrum_compare,
    transmission_capacity,
    unconstrained_capacity_search,
)

__all__ = [
    "BetaProfile",
    "BetaSummary",
    "beta",
    "beta_fixed",
    "beta_square_integral",
    "beta_summary",
    "poisson_beta_integral",
    "poisson_success",
    "SuccessBounds",
    "SuccessTerms",
    "success_bounds",
    "success_probability",
    "success_probability_fixed",
    "success_probability_nakagami",
    "success_terms",
    "CcdfBoundPair",
    "ccdf_bounds",
    "ds_cdma_outage_scaling",
    "mean_interference",
    "mean_interference_thomas",
    "tail_constants",
    "GainSplit",
    "MonotonicityLedger",
    "cluster_factor_limit",
    "clustering_gain",
    "gain_crossover",
    "gain_monotonicity_check",
    "gain_split",
    "lambda_star",
    "CapacityResult",
    "CapacitySearch",
    "ConstrainedCapacity",
    "SpreadSpectrumComparison",
    "cluster_size_for_outage",
    "constrained_capacity",
    "poisson_capacity",
    "spread_spectrum_compare",
    "transmission_capacity",
    "unconstrained_capacity_search",
]

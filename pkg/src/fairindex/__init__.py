"""Quantitative fairness and discrimination indices for resource allocations."""

from .core import (
    Allocation,
    FairnessReport,
    LegacyIndices,
    MomentSummary,
    PerUser,
    UserClass,
    demand_normalize,
    fair_mark,
    fairness_from_cov,
    fairness_index,
    fairness_report,
    generalized_index,
    legacy_indices,
    moments,
)
from .distributions import (
    DistributionSpec,
    analytic_moments,
    coefficient_of_fairness,
    monte_carlo_cof,
)
from .errors import (
    DegenerateRemainder,
    FairnessError,
    InvalidAllocation,
    InvalidDemand,
    InvalidExponent,
    InvalidParameter,
    InvalidTransfer,
)
from .theorems import (
    BoundScenario,
    Direction,
    ExchangeOutcome,
    bounded_fairness,
    discrete_min_fairness,
    exchange_effect,
    marginal_direction,
    maximizing_value,
    min_fairness_bound,
    sweep_gamma,
    two_point_allocation,
    uniform_increment,
)
from .window import (
    MvaSolution,
    UserMetrics,
    WindowScenario,
    metric_fairness,
    mva_solve,
    sna_scenario,
    user_metrics,
)

__version__ = "0.1.0"

"""Read-freshness analysis for leader-based replicated storage.

Closed-form average-age formulas, an independent Monte Carlo simulator of the
write/commit/multicast protocol, parameter sweeps, and an HTTP service plus
CLI on top.
"""

__version__ = "0.1.0"

from .analytic import (
    SystemConfig,
    TimingModel,
    exact_initial_decrease,
    initial_decrease_threshold,
    mean_age,
    mean_age_exponential,
    mean_age_given_followers,
    mean_age_given_leader,
    mean_age_scaled,
    mean_missed_rounds_min,
    optimal_leader_count,
    prob_read_hits_leader,
    prob_read_misses_leaders,
)
from .distributions import (
    Deterministic,
    Exponential,
    Uniform,
    WriteTimeDistribution,
    dist_spec,
    parse_dist,
    survival_power_integral,
)
from .errors import (
    InvalidParameterError,
    LeaderAgeError,
    ModelDegenerateError,
    UninitializedFollowerError,
)
from .simulation import (
    FollowerState,
    QueryLog,
    QueryRecord,
    SimParams,
    SimSummary,
    default_warmup_rounds,
    derive_run_seed,
    follower_age_at,
    run,
    run_with_records,
)
from .sweep import (
    FIGURE_IDS,
    SweepRow,
    SweepSpec,
    classify_monotonicity,
    figure_preset,
    run_sweep,
)

__all__ = [
    "__version__",
    "SystemConfig",
    "TimingModel",
    "prob_read_hits_leader",
    "prob_read_misses_leaders",
    "mean_age_given_leader",
    "mean_missed_rounds_min",
    "mean_age_given_followers",
    "mean_age",
    "mean_age_exponential",
    "mean_age_scaled",
    "initial_decrease_threshold",
    "exact_initial_decrease",
    "optimal_leader_count",
    "Exponential",
    "Uniform",
    "Deterministic",
    "WriteTimeDistribution",
    "parse_dist",
    "dist_spec",
    "survival_power_integral",
    "LeaderAgeError",
    "InvalidParameterError",
    "ModelDegenerateError",
    "UninitializedFollowerError",
    "SimParams",
    "SimSummary",
    "QueryRecord",
    "QueryLog",
    "FollowerState",
    "default_warmup_rounds",
    "derive_run_seed",
    "run",
    "run_with_records",
    "follower_age_at",
    "FIGURE_IDS",
    "SweepSpec",
    "SweepRow",
    "run_sweep",
    "classify_monotonicity",
    "figure_preset",
]

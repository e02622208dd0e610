"""Closed-form average read-age analysis for leader-based replication.

Updates are written sequentially to l leaders (commit takes c time units) and
then multicast to the n-l followers, each of which applies the update only if
its write finishes within the commit window. A read fans out to r random
nodes and returns the freshest copy. The functions here give the exact
average age of such a read and its behaviour as the system is scaled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .distributions import Exponential, WriteTimeDistribution, survival_power_integral
from .errors import InvalidParameterError, ModelDegenerateError

__all__ = [
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
]


@dataclass(frozen=True)
class SystemConfig:
    """Replication topology: n nodes, l of them leaders, reads of size r."""

    n: int
    l: int
    r: int

    def __post_init__(self) -> None:
        if not (isinstance(self.n, int) and self.n >= 1):
            raise InvalidParameterError(f"node count n must be an integer >= 1, got {self.n}")
        if not (isinstance(self.l, int) and 1 <= self.l <= self.n):
            raise InvalidParameterError(
                f"leader count l must satisfy 1 <= l <= n, got l={self.l}, n={self.n}"
            )
        if not (isinstance(self.r, int) and 1 <= self.r <= self.n):
            raise InvalidParameterError(
                f"query size r must satisfy 1 <= r <= n, got r={self.r}, n={self.n}"
            )

    @property
    def followers(self) -> int:
        return self.n - self.l


@dataclass(frozen=True)
class TimingModel:
    """Commit time, either explicit or scaled as c = l / (k * lam).

    Exactly one of ``c`` or the pair ``(k, lam)`` must be given. ``k`` is the
    speed of a leader write relative to the follower write rate ``lam``.
    """

    c: float | None = None
    k: float | None = None
    lam: float | None = None

    def __post_init__(self) -> None:
        explicit = self.c is not None
        scaled = self.k is not None or self.lam is not None
        if explicit and scaled:
            raise InvalidParameterError("give either an explicit commit time c or (k, lam), not both")
        if explicit:
            if not self.c > 0:
                raise InvalidParameterError(f"commit time c must be > 0, got {self.c}")
        else:
            if self.k is None or self.lam is None:
                raise InvalidParameterError("scaled timing requires both k and lam")
            if not self.k > 0:
                raise InvalidParameterError(f"relative write speed k must be > 0, got {self.k}")
            if not self.lam > 0:
                raise InvalidParameterError(f"follower write rate lam must be > 0, got {self.lam}")

    @classmethod
    def explicit(cls, c: float) -> "TimingModel":
        return cls(c=c)

    @classmethod
    def scaled(cls, k: float, lam: float) -> "TimingModel":
        return cls(k=k, lam=lam)

    @property
    def is_scaled(self) -> bool:
        return self.c is None

    def commit_time(self, l: int) -> float:
        """Resolve the commit time for a system with l leaders."""
        if self.c is not None:
            return self.c
        return l / (self.k * self.lam)


def _miss_fraction(n: int, l: int, r: int) -> Fraction:
    """Exact probability that r distinct nodes out of n avoid all l leaders."""
    if r > n - l:
        return Fraction(0)
    return Fraction(math.comb(n - l, r), math.comb(n, r))


def prob_read_misses_leaders(cfg: SystemConfig) -> float:
    """Probability that none of the r queried nodes is a leader."""
    return float(_miss_fraction(cfg.n, cfg.l, cfg.r))


def prob_read_hits_leader(cfg: SystemConfig) -> float:
    """Probability that at least one of the r queried nodes is a leader."""
    return float(1 - _miss_fraction(cfg.n, cfg.l, cfg.r))


def mean_age_given_leader(c: float) -> float:
    """Average read age when the query reaches a leader: commit latency plus
    the mean arrival offset within a slot."""
    if not c > 0:
        raise InvalidParameterError(f"commit time c must be > 0, got {c}")
    return 1.5 * c


def _survival_ratio(
    dist: WriteTimeDistribution, c: float, r: int, *, method: str = "auto"
) -> float:
    """integral of survival^r over the window, divided by 1 - (1 - p_c)^r."""
    p_c = dist.cdf(c)
    if p_c <= 0.0:
        raise ModelDegenerateError(
            f"followers never catch up within a window: F_w({c}) = 0 for {dist}"
        )
    integral = survival_power_integral(dist, c, r, method=method)
    denom = -math.expm1(r * math.log1p(-p_c)) if p_c < 1.0 else 1.0
    return integral / denom


def mean_missed_rounds_min(
    dist: WriteTimeDistribution, c: float, r: int, *, method: str = "auto"
) -> float:
    """Expected number of update rounds behind the freshest of r followers.

    Equals 1 when every queried follower already holds the newest readable
    update; grows as windows are missed.
    """
    if not (isinstance(r, int) and r >= 1):
        raise InvalidParameterError(f"query size r must be an integer >= 1, got {r}")
    if not c > 0:
        raise InvalidParameterError(f"commit time c must be > 0, got {c}")
    return 1.0 + _survival_ratio(dist, c, r, method=method) / c


def mean_age_given_followers(
    cfg: SystemConfig, dist: WriteTimeDistribution, c: float, *, method: str = "auto"
) -> float:
    """Average read age when all r queried nodes are followers."""
    if not c > 0:
        raise InvalidParameterError(f"commit time c must be > 0, got {c}")
    return 1.5 * c + _survival_ratio(dist, c, cfg.r, method=method)


def mean_age(
    cfg: SystemConfig,
    dist: WriteTimeDistribution,
    timing: TimingModel,
    *,
    method: str = "auto",
) -> float:
    """Average read age over both query outcomes (leader hit or not)."""
    c = timing.commit_time(cfg.l)
    p_miss = _miss_fraction(cfg.n, cfg.l, cfg.r)
    if p_miss == 0:
        return mean_age_given_leader(c)
    return float(1 - p_miss) * mean_age_given_leader(c) + float(p_miss) * mean_age_given_followers(
        cfg, dist, c, method=method
    )


def mean_age_exponential(cfg: SystemConfig, rate: float, c: float) -> float:
    """Closed-form average read age for exponential follower write times.

    The survival-integral ratio collapses to 1/(rate*r), so the miss branch
    contributes a constant penalty on top of the leader age.
    """
    if not rate > 0:
        raise InvalidParameterError(f"exponential rate must be > 0, got {rate}")
    if not c > 0:
        raise InvalidParameterError(f"commit time c must be > 0, got {c}")
    return 1.5 * c + prob_read_misses_leaders(cfg) / (rate * cfg.r)


def _scaled_bracket(n: int, l: int, r: int, k) -> Fraction:
    """Exact value of 3l/(2k) + (1/r) * C(n-l,r)/C(n,r)."""
    return Fraction(3 * l, 2) / Fraction(k) + _miss_fraction(n, l, r) / r


def mean_age_scaled(n: int, l: int, r: int, k: float, lam: float) -> float:
    """Average read age under the scaled model c = l/(k*lam) with exponential
    follower write times of rate lam.

    Computed in exact rational arithmetic (k enters as its exact binary
    value) with a single rounding at the end, so algebraic identities such as
    the age being constant in l when 3n/(2k) = 1 hold bit-exactly.
    """
    cfg = SystemConfig(n=n, l=l, r=r)
    if not k > 0:
        raise InvalidParameterError(f"relative write speed k must be > 0, got {k}")
    if not lam > 0:
        raise InvalidParameterError(f"follower write rate lam must be > 0, got {lam}")
    return float(_scaled_bracket(cfg.n, cfg.l, cfg.r, k) / Fraction(lam))


def initial_decrease_threshold(n: int, r: int) -> int:
    """Smallest relative leader speed k at which adding a second leader
    lowers the average age in the scaled model: ceil(3n(n-1) / (2(n-r)))."""
    if not (isinstance(n, int) and isinstance(r, int) and 1 <= r < n):
        raise InvalidParameterError(f"threshold requires integers 1 <= r < n, got n={n}, r={r}")
    return math.ceil(Fraction(3 * n * (n - 1), 2 * (n - r)))


def exact_initial_decrease(n: int, r: int, lam: float, k: float) -> bool:
    """Whether going from one leader to two strictly lowers the average age.

    Evaluated in exact rational arithmetic, so the boundary case where the
    first step is exactly flat reports False.
    """
    if not (isinstance(n, int) and n >= 2):
        raise InvalidParameterError(f"need at least two nodes, got n={n}")
    if not (isinstance(r, int) and 1 <= r <= n):
        raise InvalidParameterError(f"query size r must satisfy 1 <= r <= n, got {r}")
    if not lam > 0:
        raise InvalidParameterError(f"follower write rate lam must be > 0, got {lam}")
    if not k > 0:
        raise InvalidParameterError(f"relative write speed k must be > 0, got {k}")
    return _scaled_bracket(n, 2, r, k) < _scaled_bracket(n, 1, r, k)


def optimal_leader_count(n: int, r: int, k: float, lam: float) -> tuple[int, float]:
    """Leader count minimizing the scaled-model average age, by exhaustive
    search over l = 1..n; ties break toward the smallest l."""
    if not (isinstance(n, int) and n >= 1):
        raise InvalidParameterError(f"node count n must be an integer >= 1, got {n}")
    if not (isinstance(r, int) and 1 <= r <= n):
        raise InvalidParameterError(f"query size r must satisfy 1 <= r <= n, got {r}")
    if not k > 0:
        raise InvalidParameterError(f"relative write speed k must be > 0, got {k}")
    if not lam > 0:
        raise InvalidParameterError(f"follower write rate lam must be > 0, got {lam}")
    best_l = 1
    best = _scaled_bracket(n, 1, r, k)
    for l in range(2, n + 1):
        value = _scaled_bracket(n, l, r, k)
        if value < best:
            best_l, best = l, value
    return best_l, float(best / Fraction(lam))

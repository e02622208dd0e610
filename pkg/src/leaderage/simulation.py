"""Round-based Monte Carlo simulation of replication and instantaneous reads.

Update i is initiated at time i*c, committed (readable) at (i+1)*c, and then
multicast to the followers during the next window; a follower applies it only
if its write time beats the window, otherwise the write is cancelled when the
next multicast begins. One read query is sampled per slot after warmup: it
arrives uniformly within the slot, fans out to r distinct nodes, and scores
the minimum age among them.

The implementation is vectorized over blocks of slots. Per follower and slot
there is a single write-time draw; a slot's applied-state is the running
maximum of successful update indices, so no event queue is needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .analytic import SystemConfig, TimingModel
from .distributions import WriteTimeDistribution
from .errors import InvalidParameterError, ModelDegenerateError, UninitializedFollowerError

__all__ = [
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
]

_BLOCK_SLOTS = 8192
_WARMUP_CAP = 10**6
_NEVER = np.iinfo(np.int64).min // 2  # sentinel: no update ever applied
_STDERR_BATCHES = 32


@dataclass(frozen=True)
class SimParams:
    """Inputs of one simulation run; identical params and seed reproduce
    identical results bit for bit."""

    cfg: SystemConfig
    timing: TimingModel
    dist: WriteTimeDistribution
    query_slots: int
    seed: int
    warmup_rounds: int | None = None  # None resolves via default_warmup_rounds

    def __post_init__(self) -> None:
        if not (isinstance(self.query_slots, int) and self.query_slots >= 1):
            raise InvalidParameterError(f"query_slots must be >= 1, got {self.query_slots}")
        if not (isinstance(self.seed, int) and self.seed >= 0):
            raise InvalidParameterError(f"seed must be a nonnegative integer, got {self.seed}")
        if self.warmup_rounds is not None and not (
            isinstance(self.warmup_rounds, int) and self.warmup_rounds >= 0
        ):
            raise InvalidParameterError(f"warmup_rounds must be >= 0, got {self.warmup_rounds}")


@dataclass(frozen=True)
class SimSummary:
    """Aggregated query ages, split by whether the query reached a leader.

    Ages in nearby slots are correlated through persistent follower state, so
    standard errors come from batch means over slot-ordered batches (falling
    back to the iid formula for short runs), not from raw per-query variance.
    """

    mean_age: float
    stderr_age: float
    mean_age_b1: float | None
    mean_age_b2: float | None
    stderr_age_b1: float | None
    stderr_age_b2: float | None
    count_b1: int
    count_b2: int
    empirical_pc: float | None  # fraction of follower writes landing in-window


@dataclass(frozen=True)
class QueryRecord:
    """One read query: where it went and what age it saw."""

    slot_index: int
    arrival_offset: float
    queried_nodes: tuple[int, ...]
    hit_leader: bool
    age: float


@dataclass(frozen=True)
class QueryLog:
    """Column-oriented log of every measured query."""

    slot_index: np.ndarray  # (Q,) int64
    arrival_offset: np.ndarray  # (Q,) float64
    queried_nodes: np.ndarray  # (Q, r) int64
    hit_leader: np.ndarray  # (Q,) bool
    age: np.ndarray  # (Q,) float64

    def __len__(self) -> int:
        return len(self.age)

    def record(self, i: int) -> QueryRecord:
        return QueryRecord(
            slot_index=int(self.slot_index[i]),
            arrival_offset=float(self.arrival_offset[i]),
            queried_nodes=tuple(int(x) for x in self.queried_nodes[i]),
            hit_leader=bool(self.hit_leader[i]),
            age=float(self.age[i]),
        )

    def __iter__(self) -> Iterator[QueryRecord]:
        return (self.record(i) for i in range(len(self)))


@dataclass
class FollowerState:
    """Follower bookkeeping: initiation time of the newest applied update."""

    latest_applied_timestamp: float | None = None


def follower_age_at(state: FollowerState, t: float) -> float:
    """Age of the data at a follower at time t: elapsed time since the
    initiation of its newest applied update."""
    ts = state.latest_applied_timestamp
    if ts is None:
        raise UninitializedFollowerError("follower has never applied an update")
    if not t > ts:
        raise InvalidParameterError(
            f"query time {t} does not lie after the applied timestamp {ts}"
        )
    return t - ts


def default_warmup_rounds(dist: WriteTimeDistribution, c: float) -> int:
    """Warmup long enough that the all-consistent initial state is forgotten:
    residual bias is below (1 - p_c)^W."""
    p_c = dist.cdf(c)
    if p_c <= 0.0:
        raise ModelDegenerateError(
            f"followers never catch up within a window: F_w({c}) = 0 for {dist}"
        )
    return min(10 * math.ceil(1.0 / p_c) + 50, _WARMUP_CAP)


def derive_run_seed(master_seed: int, run_index: int) -> int:
    """Mix a master seed and a run index into an independent 64-bit run seed.

    Uses numpy's SeedSequence entropy pooling over the pair, so concurrent
    runs get independent streams regardless of scheduling order.
    """
    ss = np.random.SeedSequence(entropy=(master_seed, run_index))
    return int(ss.generate_state(1, np.uint64)[0])


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def _stderr_of_mean(values: np.ndarray) -> float:
    """Standard error of the mean of a slot-ordered, weakly dependent series:
    batch means when there is enough data, iid formula otherwise."""
    count = len(values)
    if count >= 2 * _STDERR_BATCHES:
        size = count // _STDERR_BATCHES
        batches = values[: _STDERR_BATCHES * size].reshape(_STDERR_BATCHES, size).mean(axis=1)
        return float(batches.std(ddof=1) / math.sqrt(_STDERR_BATCHES))
    return float(values.std(ddof=1) / math.sqrt(count))


def _conditional_stats(ages: np.ndarray) -> tuple[float | None, float | None, int]:
    count = len(ages)
    if count == 0:
        return None, None, 0
    mean = float(ages.mean())
    if count == 1:
        return mean, None, 1
    return mean, _stderr_of_mean(ages), count


def _simulate(params: SimParams, collect: bool) -> tuple[SimSummary, QueryLog | None]:
    cfg = params.cfg
    n, l, r = cfg.n, cfg.l, cfg.r
    n_followers = cfg.followers
    c = params.timing.commit_time(l)
    if not c > 0:
        raise InvalidParameterError(f"resolved commit time must be > 0, got {c}")

    pure_follower_possible = r <= n_followers
    if pure_follower_possible and params.dist.cdf(c) <= 0.0:
        # guarded even though l >= 1 keeps leader coverage available:
        # all-follower queries would age without bound
        raise ModelDegenerateError(
            f"followers never catch up within a window: F_w({c}) = 0 for {params.dist}"
        )

    if params.warmup_rounds is not None:
        warmup = params.warmup_rounds
    elif n_followers == 0 or not pure_follower_possible:
        warmup = 0
    else:
        warmup = default_warmup_rounds(params.dist, c)

    queries = params.query_slots
    total_slots = warmup + queries
    rng = _rng(params.seed)

    # applied update index per follower at the start of the current slot;
    # slot m multicasts update m-1, so "consistent at start" means m-2
    applied = np.full(n_followers, -1, dtype=np.int64)

    ages_parts: list[np.ndarray] = []
    hit_parts: list[np.ndarray] = []
    log_slots: list[np.ndarray] = []
    log_offsets: list[np.ndarray] = []
    log_nodes: list[np.ndarray] = []
    success_count = 0
    success_total = 0

    for block_start in range(1, total_slots + 1, _BLOCK_SLOTS):
        block = min(_BLOCK_SLOTS, total_slots + 1 - block_start)
        slots = block_start + np.arange(block, dtype=np.int64)

        if n_followers > 0:
            draws = params.dist.sample(rng, size=(block, n_followers))
            success = draws < c
            landed = np.where(success, slots[:, None] - 1, _NEVER)
            running = np.maximum.accumulate(landed, axis=0)
            applied_at_start = np.empty((block, n_followers), dtype=np.int64)
            applied_at_start[0] = applied
            if block > 1:
                np.maximum(applied, running[:-1], out=applied_at_start[1:])
            applied = np.maximum(applied, running[-1])

        first_measured = max(0, warmup + 1 - block_start)
        measured = block - first_measured
        if measured <= 0:
            continue

        offsets = rng.uniform(0.0, c, size=measured)
        perms = rng.permuted(np.tile(np.arange(n, dtype=np.int64), (measured, 1)), axis=1)
        nodes = perms[:, :r]
        hit_leader = (nodes < l).any(axis=1)

        if n_followers > 0:
            rows = np.arange(first_measured, block)
            follower_idx = np.where(nodes >= l, nodes - l, 0)
            current_draw = draws[rows[:, None], follower_idx]
            applied_rows = applied_at_start[rows[:, None], follower_idx]
            missed = np.where(
                current_draw <= offsets[:, None],
                np.int64(1),
                slots[rows, None] - applied_rows,
            )
            missed = np.where(nodes < l, np.int64(1), missed)
            success_count += int(np.count_nonzero(success[first_measured:]))
            success_total += measured * n_followers
        else:
            missed = np.ones((measured, r), dtype=np.int64)

        ages = missed.min(axis=1) * c + offsets
        ages_parts.append(ages)
        hit_parts.append(hit_leader)
        if collect:
            log_slots.append(slots[first_measured:])
            log_offsets.append(offsets)
            log_nodes.append(nodes)

    all_ages = np.concatenate(ages_parts)
    all_hits = np.concatenate(hit_parts)

    mean_b1, stderr_b1, count_b1 = _conditional_stats(all_ages[all_hits])
    mean_b2, stderr_b2, count_b2 = _conditional_stats(all_ages[~all_hits])
    summary = SimSummary(
        mean_age=float(all_ages.mean()),
        stderr_age=_stderr_of_mean(all_ages) if queries > 1 else 0.0,
        mean_age_b1=mean_b1,
        mean_age_b2=mean_b2,
        stderr_age_b1=stderr_b1,
        stderr_age_b2=stderr_b2,
        count_b1=count_b1,
        count_b2=count_b2,
        empirical_pc=(success_count / success_total) if success_total else None,
    )
    log = None
    if collect:
        log = QueryLog(
            slot_index=np.concatenate(log_slots),
            arrival_offset=np.concatenate(log_offsets),
            queried_nodes=np.concatenate(log_nodes),
            hit_leader=all_hits,
            age=all_ages,
        )
    return summary, log


def run(params: SimParams) -> SimSummary:
    """Simulate warmup plus one query per slot; see the module docstring."""
    summary, _ = _simulate(params, collect=False)
    return summary


def run_with_records(params: SimParams) -> tuple[SimSummary, QueryLog]:
    """Like :func:`run` but also returns the per-query log."""
    summary, log = _simulate(params, collect=True)
    assert log is not None
    return summary, log

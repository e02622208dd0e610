import math

import numpy as np
import pytest

from leaderage.analytic import (
    SystemConfig,
    TimingModel,
    mean_age_given_followers,
    mean_age_given_leader,
)
from leaderage.distributions import Deterministic, Exponential, Uniform
from leaderage.errors import (
    InvalidParameterError,
    ModelDegenerateError,
    UninitializedFollowerError,
)
from leaderage.simulation import (
    FollowerState,
    SimParams,
    default_warmup_rounds,
    derive_run_seed,
    follower_age_at,
    run,
    run_with_records,
)

from conftest import ks_discrete


def params(n, l, r, c, dist, slots=20_000, seed=11, warmup=None):
    return SimParams(
        cfg=SystemConfig(n=n, l=l, r=r),
        timing=TimingModel.explicit(c),
        dist=dist,
        query_slots=slots,
        seed=seed,
        warmup_rounds=warmup,
    )


class TestTrivialRegimes:
    def test_all_leaders(self):
        summary = run(params(4, 4, 2, 2.0, Exponential(1.0)))
        assert summary.count_b2 == 0
        assert summary.empirical_pc is None
        assert abs(summary.mean_age - 3.0) <= 3 * summary.stderr_age

    def test_instant_followers(self):
        summary = run(params(10, 2, 3, 1.0, Deterministic(0.0)))
        assert abs(summary.mean_age - 1.5) <= 3 * summary.stderr_age

    def test_reference_point(self):
        p = SimParams(
            cfg=SystemConfig(n=50, l=5, r=4),
            timing=TimingModel.scaled(k=100.0, lam=1.0),
            dist=Exponential(1.0),
            query_slots=50_000,
            seed=3,
        )
        summary = run(p)
        assert abs(summary.mean_age - 0.2367401215805471) <= max(
            3 * summary.stderr_age, 0.01 * 0.2367401215805471
        )


class TestDeterminism:
    def test_identical_summaries(self):
        p = params(12, 3, 4, 0.8, Uniform(1.5), slots=5_000, seed=99)
        assert run(p) == run(p)

    def test_seed_changes_results(self):
        a = run(params(12, 3, 4, 0.8, Uniform(1.5), slots=5_000, seed=1))
        b = run(params(12, 3, 4, 0.8, Uniform(1.5), slots=5_000, seed=2))
        assert a.mean_age != b.mean_age

    def test_derive_run_seed(self):
        assert derive_run_seed(42, 0) == derive_run_seed(42, 0)
        assert derive_run_seed(42, 0) != derive_run_seed(42, 1)
        assert derive_run_seed(41, 0) != derive_run_seed(42, 0)
        assert 0 <= derive_run_seed(7, 3) < 2**64


class TestQueryLog:
    def test_leader_hits_pin_the_age(self):
        p = params(8, 2, 3, 0.6, Exponential(2.0), slots=4_000)
        summary, log = run_with_records(p)
        assert len(log) == 4_000
        hits = log.hit_leader
        # a leader in the read set pins the age to commit latency + offset
        np.testing.assert_allclose(
            log.age[hits], 0.6 + log.arrival_offset[hits], rtol=0, atol=1e-12
        )
        assert summary.count_b1 == int(hits.sum())

    def test_leader_age_stays_inside_slot_band(self):
        c = 0.6
        _, log = run_with_records(params(8, 2, 3, c, Exponential(2.0), slots=4_000))
        leader_ages = log.age[log.hit_leader]
        assert leader_ages.min() >= c
        assert leader_ages.max() < 2 * c

    def test_nodes_are_distinct_and_in_range(self):
        _, log = run_with_records(params(9, 2, 4, 1.0, Uniform(2.0), slots=2_000))
        assert log.queried_nodes.shape == (2_000, 4)
        assert log.queried_nodes.min() >= 0
        assert log.queried_nodes.max() < 9
        for row in log.queried_nodes:
            assert len(set(row.tolist())) == 4

    def test_record_view(self):
        _, log = run_with_records(params(6, 1, 2, 1.0, Uniform(2.0), slots=50))
        rec = log.record(0)
        assert rec.age == log.age[0]
        assert rec.hit_leader == bool(log.hit_leader[0])
        assert len(rec.queried_nodes) == 2

    def test_follower_ages_are_integer_rounds_plus_offset(self):
        c = 0.7
        _, log = run_with_records(params(6, 1, 2, c, Uniform(1.4), slots=3_000))
        z = (log.age - log.arrival_offset) / c
        np.testing.assert_allclose(z, np.round(z), atol=1e-9)
        assert (np.round(z) >= 1).all()


class TestConditionalMeans:
    @pytest.mark.parametrize(
        "dist", [Exponential(1.0), Uniform(2.0), Deterministic(0.5)], ids=["exp", "uniform", "det"]
    )
    def test_b1_and_b2_converge(self, dist):
        c = 1.0
        cfg = SystemConfig(n=20, l=2, r=3)
        p = SimParams(
            cfg=cfg, timing=TimingModel.explicit(c), dist=dist, query_slots=60_000, seed=5
        )
        summary = run(p)
        b1_expected = mean_age_given_leader(c)
        assert abs(summary.mean_age_b1 - b1_expected) <= max(
            3 * summary.stderr_age_b1, 0.01 * b1_expected
        )
        b2_expected = mean_age_given_followers(cfg, dist, c, method="quadrature")
        assert abs(summary.mean_age_b2 - b2_expected) <= max(
            3 * summary.stderr_age_b2, 0.01 * b2_expected
        )

    def test_summary_mixes_conditionals(self):
        summary = run(params(15, 3, 2, 0.9, Exponential(0.8), slots=10_000))
        mixed = (
            summary.count_b1 * summary.mean_age_b1 + summary.count_b2 * summary.mean_age_b2
        ) / (summary.count_b1 + summary.count_b2)
        assert summary.mean_age == pytest.approx(mixed, rel=1e-12)

    def test_empirical_pc(self):
        dist = Uniform(2.0)
        c = 1.0
        summary = run(params(10, 2, 3, c, dist, slots=30_000))
        p_c = dist.cdf(c)
        n_draws = 30_000 * 8
        se = math.sqrt(p_c * (1 - p_c) / n_draws)
        assert abs(summary.empirical_pc - p_c) <= 3 * se


class TestMissedRoundLaw:
    def test_geometric_tail(self):
        # single follower, single-node reads: age decomposes as Z*c + offset
        # with Z following the mixed geometric law
        dist = Exponential(1.0)
        c = 1.0
        p = params(2, 1, 1, c, dist, slots=200_000, seed=17)
        _, log = run_with_records(p)
        b2 = ~log.hit_leader
        z = np.round((log.age[b2] - log.arrival_offset[b2]) / c).astype(int)
        assert len(z) > 90_000

        p_c = dist.cdf(c)
        q1 = 1.0 - (1.0 - math.exp(-c)) / c  # (1/c) * integral of F over the window
        # arrival-averaged law: P(1) = q1, P(j) = (1-q1)(1-p_c)^(j-2) p_c
        def pmf(j: int) -> float:
            if j == 1:
                return q1
            return (1.0 - q1) * (1.0 - p_c) ** (j - 2) * p_c

        assert ks_discrete(z, pmf, support_max=int(z.max())) < 0.01

    def test_conditional_tail_is_geometric(self):
        # given at least one full miss, the remaining count is memoryless
        dist = Uniform(2.0)
        c = 1.0
        _, log = run_with_records(params(2, 1, 1, c, dist, slots=200_000, seed=23))
        b2 = ~log.hit_leader
        z = np.round((log.age[b2] - log.arrival_offset[b2]) / c).astype(int)
        tail = z[z >= 2] - 1
        p_c = dist.cdf(c)

        def pmf(j: int) -> float:
            return (1.0 - p_c) ** (j - 1) * p_c

        assert ks_discrete(tail, pmf, support_max=int(tail.max())) < 0.01


class TestGuards:
    def test_degenerate_distribution(self):
        with pytest.raises(ModelDegenerateError):
            run(params(10, 2, 3, 1.0, Deterministic(2.0)))

    def test_degenerate_harmless_when_reads_always_reach_leaders(self):
        summary = run(params(10, 8, 3, 1.0, Deterministic(2.0), slots=2_000))
        assert abs(summary.mean_age - 1.5) <= 3 * summary.stderr_age
        assert summary.count_b2 == 0

    def test_bad_params(self):
        with pytest.raises(InvalidParameterError):
            params(10, 2, 3, 1.0, Exponential(1.0), slots=0)
        with pytest.raises(InvalidParameterError):
            params(10, 2, 3, 1.0, Exponential(1.0), seed=-1)
        with pytest.raises(InvalidParameterError):
            params(10, 2, 3, 1.0, Exponential(1.0), warmup=-1)

    def test_explicit_warmup_honoured(self):
        a = run(params(10, 2, 3, 1.0, Uniform(2.0), slots=2_000, warmup=0))
        b = run(params(10, 2, 3, 1.0, Uniform(2.0), slots=2_000, warmup=700))
        assert a != b  # different slot alignment shifts the stream

    def test_default_warmup_scales_with_success_rate(self):
        assert default_warmup_rounds(Deterministic(0.0), 1.0) == 60
        slow = Exponential(0.01)
        assert default_warmup_rounds(slow, 1.0) == 10 * math.ceil(1 / slow.cdf(1.0)) + 50
        with pytest.raises(ModelDegenerateError):
            default_warmup_rounds(Deterministic(2.0), 1.0)


class TestFollowerState:
    def test_one_round_behind(self):
        state = FollowerState(latest_applied_timestamp=4.0)  # (k-1)c with c=1, k=5
        assert follower_age_at(state, 5.0 + 0.3) == pytest.approx(1.3)

    def test_three_rounds_behind(self):
        state = FollowerState(latest_applied_timestamp=2.0)
        assert follower_age_at(state, 5.0 + 0.3) == pytest.approx(3.3)

    def test_uninitialized_is_distinct(self):
        with pytest.raises(UninitializedFollowerError):
            follower_age_at(FollowerState(), 1.0)

    def test_rejects_non_causal_query(self):
        with pytest.raises(InvalidParameterError):
            follower_age_at(FollowerState(latest_applied_timestamp=2.0), 1.5)

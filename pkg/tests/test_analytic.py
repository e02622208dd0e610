import math
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leaderage.analytic import (
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
from leaderage.distributions import Deterministic, Exponential, Uniform
from leaderage.errors import InvalidParameterError, ModelDegenerateError

from conftest import stable_product_miss_prob


class TestConfigAndTiming:
    def test_valid(self):
        cfg = SystemConfig(n=10, l=3, r=2)
        assert cfg.followers == 7

    @pytest.mark.parametrize("n,l,r", [(10, 0, 1), (10, 11, 1), (10, 1, 0), (10, 1, 11), (0, 1, 1)])
    def test_invalid(self, n, l, r):
        with pytest.raises(InvalidParameterError):
            SystemConfig(n=n, l=l, r=r)

    def test_timing_explicit(self):
        assert TimingModel.explicit(0.4).commit_time(17) == 0.4

    def test_timing_scaled(self):
        assert TimingModel.scaled(k=100.0, lam=1.0).commit_time(5) == pytest.approx(0.05)

    def test_timing_exactly_one_form(self):
        with pytest.raises(InvalidParameterError):
            TimingModel(c=1.0, k=10.0, lam=1.0)
        with pytest.raises(InvalidParameterError):
            TimingModel(k=10.0)
        with pytest.raises(InvalidParameterError):
            TimingModel.explicit(0.0)
        with pytest.raises(InvalidParameterError):
            TimingModel.scaled(k=-1.0, lam=1.0)


class TestLeaderHitProbability:
    def test_small_query_covers_all(self):
        assert prob_read_hits_leader(SystemConfig(n=4, l=2, r=3)) == 1.0

    def test_single_node_query(self):
        # 5 of 50 choices are leaders
        assert prob_read_hits_leader(SystemConfig(n=50, l=5, r=1)) == pytest.approx(0.1)

    def test_single_node_query_by_enumeration(self):
        cfg = SystemConfig(n=50, l=5, r=1)
        hits = sum(1 for (node,) in combinations(range(50), 1) if node < 5)
        assert prob_read_hits_leader(cfg) == pytest.approx(hits / 50)

    def test_all_leaders(self):
        assert prob_read_hits_leader(SystemConfig(n=10, l=10, r=1)) == 1.0

    def test_exhaustive_enumeration_small(self):
        cfg = SystemConfig(n=7, l=2, r=3)
        subsets = list(combinations(range(7), 3))
        hits = sum(1 for s in subsets if any(node < 2 for node in s))
        assert prob_read_hits_leader(cfg) == pytest.approx(hits / len(subsets))

    @settings(max_examples=120, deadline=None)
    @given(st.integers(2, 400), st.data())
    def test_matches_stable_product_form(self, n, data):
        l = data.draw(st.integers(1, n))
        r = data.draw(st.integers(1, n))
        cfg = SystemConfig(n=n, l=l, r=r)
        assert prob_read_misses_leaders(cfg) == pytest.approx(
            stable_product_miss_prob(n, l, r), rel=1e-12
        )

    @settings(max_examples=60, deadline=None)
    @given(st.integers(3, 120), st.data())
    def test_nondecreasing_in_l_and_r(self, n, data):
        l = data.draw(st.integers(1, n - 1))
        r = data.draw(st.integers(1, n - 1))
        base = prob_read_hits_leader(SystemConfig(n=n, l=l, r=r))
        assert prob_read_hits_leader(SystemConfig(n=n, l=l + 1, r=r)) >= base - 1e-15
        assert prob_read_hits_leader(SystemConfig(n=n, l=l, r=r + 1)) >= base - 1e-15


class TestLeaderAge:
    @pytest.mark.parametrize("c,expected", [(2.0, 3.0), (1.0, 1.5), (0.05, 0.075)])
    def test_values(self, c, expected):
        assert mean_age_given_leader(c) == pytest.approx(expected)

    def test_rejects_nonpositive(self):
        with pytest.raises(InvalidParameterError):
            mean_age_given_leader(0.0)


class TestMissedRounds:
    def test_exponential_long_window(self):
        # integral and denominator share the factor 1 - e^{-10}
        assert mean_missed_rounds_min(Exponential(1.0), 10.0, 1) == pytest.approx(1.1, rel=1e-12)

    def test_deterministic_always_consistent(self):
        assert mean_missed_rounds_min(Deterministic(0.0), 3.0, 5) == pytest.approx(1.0)

    def test_uniform_matching_window(self):
        assert mean_missed_rounds_min(Uniform(2.0), 2.0, 1) == pytest.approx(1.5)

    def test_degenerate_rejected(self):
        with pytest.raises(ModelDegenerateError):
            mean_missed_rounds_min(Deterministic(2.0), 1.0, 1)

    def test_at_least_one_round(self):
        for dist in (Exponential(0.3), Uniform(5.0), Deterministic(0.2)):
            assert mean_missed_rounds_min(dist, 0.7, 3) >= 1.0


class TestFollowerAge:
    def test_exponential_penalty(self):
        # ratio collapses to 1/(rate*r) for the exponential law
        cfg = SystemConfig(n=50, l=5, r=4)
        for c in (0.05, 0.8, 3.0):
            assert mean_age_given_followers(cfg, Exponential(1.0), c) == pytest.approx(
                1.5 * c + 0.25, rel=1e-12
            )

    def test_deterministic_zero(self):
        cfg = SystemConfig(n=10, l=2, r=3)
        assert mean_age_given_followers(cfg, Deterministic(0.0), 1.2) == pytest.approx(1.8)

    def test_uniform_matching_window(self):
        cfg = SystemConfig(n=10, l=2, r=1)
        assert mean_age_given_followers(cfg, Uniform(2.0), 2.0) == pytest.approx(4.0)

    def test_consistency_with_missed_rounds(self):
        # followers age = (missed rounds) * c + mean arrival offset
        cfg = SystemConfig(n=30, l=3, r=4)
        c = 0.9
        for dist in (Exponential(2.0), Uniform(1.7), Deterministic(0.3)):
            expected = mean_missed_rounds_min(dist, c, cfg.r) * c + c / 2
            assert mean_age_given_followers(cfg, dist, c) == pytest.approx(expected, rel=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(c=st.floats(0.05, 4.0), r=st.integers(1, 10),
           kind=st.sampled_from(["exp", "uniform", "det"]),
           param=st.floats(0.05, 6.0))
    def test_never_fresher_than_leaders(self, c, r, kind, param):
        dist = {"exp": Exponential, "uniform": Uniform, "det": Deterministic}[kind](param)
        cfg = SystemConfig(n=40, l=2, r=r)
        if dist.cdf(c) <= 0:
            return
        assert mean_age_given_followers(cfg, dist, c) >= mean_age_given_leader(c) - 1e-12


class TestMeanAge:
    def test_reference_point(self):
        cfg = SystemConfig(n=50, l=5, r=4)
        timing = TimingModel.scaled(k=100.0, lam=1.0)
        assert mean_age(cfg, Exponential(1.0), timing) == pytest.approx(
            0.2367401215805471, rel=1e-12
        )

    def test_all_leader_branch(self):
        cfg = SystemConfig(n=50, l=50, r=1)
        timing = TimingModel.explicit(2.0)
        assert mean_age(cfg, Exponential(1.0), timing) == 3.0

    def test_matches_regime_formula(self):
        # with n=50, r=1, rate 1: age = 1 + (75/k - 1) * l/50
        cfg = SystemConfig(n=50, l=10, r=1)
        timing = TimingModel.scaled(k=50.0, lam=1.0)
        assert mean_age(cfg, Exponential(1.0), timing) == pytest.approx(1.1, rel=1e-12)

    def test_degenerate_propagates(self):
        cfg = SystemConfig(n=10, l=2, r=2)
        with pytest.raises(ModelDegenerateError):
            mean_age(cfg, Deterministic(5.0), TimingModel.explicit(1.0))

    def test_degenerate_irrelevant_when_leaders_always_hit(self):
        cfg = SystemConfig(n=10, l=9, r=2)  # r > n - l, every read sees a leader
        assert mean_age(cfg, Deterministic(5.0), TimingModel.explicit(1.0)) == 1.5

    def test_nonincreasing_in_r(self):
        cfg_template = dict(n=30, l=4)
        timing = TimingModel.explicit(0.7)
        ages = [
            mean_age(SystemConfig(r=r, **cfg_template), Uniform(2.0), timing)
            for r in range(1, 27)
        ]
        assert all(b <= a + 1e-12 for a, b in zip(ages, ages[1:]))

    @settings(max_examples=80, deadline=None)
    @given(n=st.integers(2, 120), data=st.data(),
           c=st.floats(0.01, 4.0), rate=st.floats(0.1, 5.0))
    def test_exponential_identity(self, n, data, c, rate):
        l = data.draw(st.integers(1, n))
        r = data.draw(st.integers(1, n))
        cfg = SystemConfig(n=n, l=l, r=r)
        generic = mean_age(cfg, Exponential(rate), TimingModel.explicit(c))
        closed = 1.5 * c + prob_read_misses_leaders(cfg) / (rate * r)
        assert generic == pytest.approx(closed, rel=1e-9)
        assert mean_age_exponential(cfg, rate, c) == pytest.approx(closed, rel=1e-12)


class TestScaledModel:
    def test_flat_regime_is_exact(self):
        for l in range(1, 50):
            assert mean_age_scaled(50, l, 1, 75.0, 1.0) == 1.0

    def test_point_value(self):
        assert mean_age_scaled(50, 10, 1, 50.0, 1.0) == pytest.approx(1.1, rel=1e-15)

    def test_all_leaders_keeps_commit_term_only(self):
        assert mean_age_scaled(50, 50, 1, 150.0, 1.0) == pytest.approx(0.5, rel=1e-15)

    def test_rejects_zero_leaders(self):
        with pytest.raises(InvalidParameterError):
            mean_age_scaled(50, 0, 1, 100.0, 1.0)

    @settings(max_examples=80, deadline=None)
    @given(n=st.integers(2, 100), data=st.data(),
           k=st.integers(5, 300), rate=st.floats(0.2, 4.0))
    def test_agrees_with_generic_path(self, n, data, k, rate):
        l = data.draw(st.integers(1, n))
        r = data.draw(st.integers(1, n))
        cfg = SystemConfig(n=n, l=l, r=r)
        timing = TimingModel.scaled(k=float(k), lam=rate)
        assert mean_age_scaled(n, l, r, float(k), rate) == pytest.approx(
            mean_age(cfg, Exponential(rate), timing), rel=1e-12
        )


class TestInitialDecreaseThreshold:
    def test_paper_grid_values(self):
        assert initial_decrease_threshold(50, 5) == 82
        assert initial_decrease_threshold(50, 1) == 75

    def test_smallest_system(self):
        # ceil(3*2*1 / (2*1)) = 3
        assert initial_decrease_threshold(2, 1) == 3

    def test_rejects_r_at_least_n(self):
        with pytest.raises(InvalidParameterError):
            initial_decrease_threshold(50, 50)
        with pytest.raises(InvalidParameterError):
            initial_decrease_threshold(50, 60)


class TestExactInitialDecrease:
    def test_regimes_for_single_node_reads(self):
        assert exact_initial_decrease(50, 1, 1.0, 100.0) is True
        assert exact_initial_decrease(50, 1, 1.0, 50.0) is False

    def test_flat_boundary_is_not_a_decrease(self):
        # at k = 75 the first step is exactly level
        assert exact_initial_decrease(50, 1, 1.0, 75.0) is False
        assert exact_initial_decrease(50, 1, 1.0, 76.0) is True

    def test_boundary_scan_r5(self):
        # direct evaluation: no decrease through k=81, decrease from k=82 on,
        # which is exactly the closed-form threshold
        results = {k: exact_initial_decrease(50, 5, 1.0, float(k)) for k in range(76, 86)}
        assert all(not results[k] for k in range(76, 82))
        assert all(results[k] for k in range(82, 86))


class TestOptimalLeaderCount:
    def test_interior_optimum(self):
        l_star, age_star = optimal_leader_count(50, 4, 150.0, 1.0)
        assert l_star == 10
        assert age_star == pytest.approx(0.19920755536257057, rel=1e-12)

    def test_monotone_increasing_prefers_one_leader(self):
        assert optimal_leader_count(50, 1, 50.0, 1.0)[0] == 1

    def test_fast_leaders_prefer_all_leaders(self):
        # l = 50 wins the boundary branch: age 3*50/(2*150) = 0.5 beats l=49
        l_star, age_star = optimal_leader_count(50, 1, 150.0, 1.0)
        assert l_star == 50
        assert age_star == pytest.approx(0.5, rel=1e-15)

    def test_optimum_beats_neighbours(self):
        for r, k in ((2, 90.0), (5, 200.0), (1, 120.0)):
            l_star, age_star = optimal_leader_count(50, r, k, 1.0)
            for l in range(1, 51):
                assert age_star <= mean_age_scaled(50, l, r, k, 1.0) + 1e-15

    def test_tie_breaks_to_smallest(self):
        # n=2, r=1, at the flat point every l gives the same age
        n = 2
        k = 3.0  # 3n/2
        l_star, _ = optimal_leader_count(n, 1, k, 1.0)
        assert l_star == 1

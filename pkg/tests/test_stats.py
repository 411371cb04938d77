"""Rank statistics: hand values, exhaustive-permutation oracles, properties."""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from npwbs.stats import (
    compute_ranks,
    lepage,
    lepage_scan,
    mann_whitney_moments,
    mann_whitney_u,
    max_lepage,
    mood_m,
    mood_moments,
)


def brute_ranks(y):
    """O(n^2) restatement of the tie rule, independent of the argsort path."""
    y = list(y)
    return [
        sum(yj < yi for yj in y) + sum(y[j] == yi for j in range(i + 1))
        for i, yi in enumerate(y)
    ]


class TestComputeRanks:
    def test_distinct_values(self):
        assert compute_ranks(np.array([3.1, 1.2, 2.5])).tolist() == [3, 1, 2]

    def test_singleton(self):
        assert compute_ranks(np.array([5.0])).tolist() == [1]

    def test_stable_tie_rule(self):
        assert compute_ranks(np.array([2.0, 2.0, 1.0])).tolist() == [2, 3, 1]

    def test_empty_errors(self):
        with pytest.raises(ValueError):
            compute_ranks(np.array([]))

    @given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=40))
    def test_matches_brute_force_tie_rule(self, values):
        got = compute_ranks(np.array(values)).tolist()
        assert got == brute_ranks(values)
        assert sorted(got) == list(range(1, len(values) + 1))

    @given(st.lists(st.integers(-(10**6), 10**6), min_size=2, max_size=30, unique=True))
    def test_monotone_transform_invariance(self, values):
        # integer-valued inputs keep exp() injective in floating point
        y = np.array(values, dtype=np.float64)
        f = np.exp(y / 2e6)
        assert compute_ranks(y).tolist() == compute_ranks(f).tolist()


class TestMannWhitney:
    def test_minimal_split(self):
        assert mann_whitney_u(np.array([1, 2, 3, 4]), 2) == 0.0

    def test_maximal_split(self):
        assert mann_whitney_u(np.array([3, 4, 1, 2]), 2) == 4.0

    def test_permutation_mean_matches_moment(self):
        n, k = 4, 2
        us = [
            mann_whitney_u(np.array(p), k)
            for p in itertools.permutations(range(1, n + 1))
        ]
        mean, _ = mann_whitney_moments(n, k)
        assert np.mean(us) == pytest.approx(mean, abs=1e-12)
        assert mean == 2.0

    def test_k_out_of_range(self):
        for k in (0, 4, -1):
            with pytest.raises(ValueError):
                mann_whitney_u(np.array([1, 2, 3, 4]), k)

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            mann_whitney_u(np.array([1, 2, 2, 4]), 2)

    @given(st.permutations(list(range(1, 9))), st.integers(1, 7))
    def test_label_swap_antisymmetry(self, ranks, k):
        # reversing the sample reverses the rank vector, so the two split
        # statistics partition the total rank sum: U(r,k) + U(rev,n-k) = k(n-k)
        n = len(ranks)
        u = mann_whitney_u(np.array(ranks), k)
        u_rev = mann_whitney_u(np.array(ranks[::-1]), n - k)
        assert u + u_rev == pytest.approx(k * (n - k))

    @given(st.permutations(list(range(1, 10))), st.integers(1, 8))
    def test_range_bound(self, ranks, k):
        n = len(ranks)
        u = mann_whitney_u(np.array(ranks), k)
        assert 0.0 <= u <= k * (n - k)


class TestMood:
    def test_hand_value_low(self):
        assert mood_m(np.array([1, 2, 3, 4]), 2) == 2.5

    def test_hand_value_spread(self):
        assert mood_m(np.array([1, 4, 2, 3]), 2) == 4.5

    def test_permutation_mean_matches_moment(self):
        n, k = 4, 2
        ms = [mood_m(np.array(p), k) for p in itertools.permutations(range(1, n + 1))]
        mean, _ = mood_moments(n, k)
        assert np.mean(ms) == pytest.approx(mean, abs=1e-12)
        assert mean == 2.5


def exhaustive_moments(n, k, stat):
    """Population mean/variance of a rank statistic over all n! permutations."""
    vals = np.array([stat(np.array(p), k) for p in itertools.permutations(range(1, n + 1))])
    return vals.mean(), vals.var()


@pytest.mark.parametrize("n", range(3, 8))
def test_closed_form_moments_match_enumeration(n):
    for k in range(1, n):
        for stat, moments in ((mann_whitney_u, mann_whitney_moments), (mood_m, mood_moments)):
            mean, var = exhaustive_moments(n, k, stat)
            em, ev = moments(n, k)
            assert mean == pytest.approx(em, abs=1e-9)
            assert var == pytest.approx(ev, abs=1e-9)


class TestLepage:
    def test_hand_value_ordered(self):
        assert lepage(np.array([1, 2, 3, 4]), 2).value == pytest.approx(2.4, abs=1e-12)

    def test_hand_value_swapped(self):
        assert lepage(np.array([3, 4, 1, 2]), 2).value == pytest.approx(2.4, abs=1e-12)

    def test_hand_value_scale(self):
        assert lepage(np.array([1, 4, 2, 3]), 2).value == pytest.approx(3.0, abs=1e-12)

    def test_n2_degenerate(self):
        with pytest.raises(ValueError):
            lepage(np.array([1, 2]), 1)

    @given(st.permutations(list(range(1, 8))), st.integers(1, 6))
    def test_nonnegative(self, ranks, k):
        assert lepage(np.array(ranks), k).value >= 0.0

    @given(st.lists(st.integers(-(10**6), 10**6), min_size=3, max_size=25, unique=True))
    def test_rank_only_dependence(self, values):
        # integer-valued inputs keep arctan() injective in floating point
        y = np.array(values, dtype=np.float64)
        k = max(1, len(values) // 2)
        a = lepage(compute_ranks(y), k).value
        b = lepage(compute_ranks(np.arctan(y / 1e6)), k).value
        assert a == pytest.approx(b, rel=1e-12)


class TestMaxLepage:
    def test_hand_value(self):
        res = max_lepage(np.array([1, 2, 3, 4]))
        assert res.t_max == pytest.approx(2.8, abs=1e-12)
        assert res.argmax_k == 1  # 2.8 also at k=3; smallest split wins

    def test_n3_has_two_candidates(self):
        ranks = np.array([2, 3, 1])
        res = max_lepage(ranks)
        both = [lepage(ranks, 1).value, lepage(ranks, 2).value]
        assert res.t_max == max(both)
        assert res.argmax_k == int(np.argmax(both)) + 1

    @given(st.permutations(list(range(1, 11))))
    def test_matches_brute_force(self, ranks):
        r = np.array(ranks)
        res = max_lepage(r)
        vals = [lepage(r, k).value for k in range(1, len(ranks))]
        assert res.t_max == pytest.approx(max(vals), rel=1e-12)
        best = max(range(len(vals)), key=lambda i: (vals[i], -i))
        assert res.argmax_k == best + 1

    def test_scan_matches_pointwise_lepage(self):
        rng = np.random.default_rng(4)
        ranks = compute_ranks(rng.standard_normal(60))
        scan = lepage_scan(ranks)
        for k in (1, 13, 30, 59):
            assert scan[k - 1] == pytest.approx(lepage(ranks, k).value, rel=1e-12)

    def test_too_short(self):
        with pytest.raises(ValueError):
            max_lepage(np.array([1, 2]))

    def test_deterministic(self):
        r = np.array([5, 2, 7, 1, 6, 3, 4])
        assert max_lepage(r) == max_lepage(r)


def test_moment_formulas_spot_values():
    # n=4, k=2: E[U]=2, Var[U]=5/3, E[M]=2.5, Var[M]=4/3 (used by the hand values)
    assert mann_whitney_moments(4, 2) == (2.0, pytest.approx(5 / 3))
    assert mood_moments(4, 2) == (2.5, pytest.approx(4 / 3))
    assert math.isclose(mood_moments(10, 3)[0], 3 * 99 / 12)

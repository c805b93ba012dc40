import math
from fractions import Fraction

import numpy as np
import pytest

from treebias.analytic import (SplitSummary, expected_left_fraction, expected_positive_region,
                               logistic_intercept_bias, theorem1_breakdown, theorem2_breakdown,
                               theorem2_derivative_in_p, theorem2_ratio_p2,
                               theorem3_expected_prevalence)


def test_theorem1_n10():
    br = theorem1_breakdown(10)
    assert br.e_size_overall == pytest.approx(0.1)
    assert br.ratio_to_true == pytest.approx(1.0)
    assert br.e_size_extreme == pytest.approx(1.5 / 11)
    assert br.p_extreme == pytest.approx(0.2)


def test_theorem1_large_n():
    assert abs(theorem1_breakdown(1000).e_size_overall - 0.001) < 1e-15


@pytest.mark.parametrize("n", [0, 1, 2])
def test_theorem1_rejects_small_n(n):
    with pytest.raises(ValueError):
        theorem1_breakdown(n)


def test_theorem1_identity_exact():
    for n in range(3, 65):
        br = theorem1_breakdown(n, exact=True)
        assert br.e_size_overall * n == 1
        assert br.e_size_overall == (br.p_extreme * br.e_size_extreme
                                     + (1 - br.p_extreme) * br.e_size_not_extreme)


def test_theorem2_n10_p2():
    br = theorem2_breakdown(10, 2)
    assert br.ratio_to_true == pytest.approx(118 / 110)
    assert br.p_extreme == pytest.approx(0.36)
    assert 10 * br.e_size_extreme == pytest.approx(15 / 11)


def test_theorem2_reduces_to_theorem1():
    assert theorem2_breakdown(10, 1).ratio_to_true == pytest.approx(1.0)


@pytest.mark.parametrize("n,p", [(2, 2), (10, 0), (10, 1.5)])
def test_theorem2_rejects(n, p):
    with pytest.raises(ValueError):
        theorem2_breakdown(n, p)


def test_theorem2_p2_closed_form():
    for n in range(3, 65):
        assert theorem2_breakdown(n, 2, exact=True).ratio_to_true == theorem2_ratio_p2(n, exact=True)


def test_theorem2_bias_grid():
    for n in range(3, 201):
        ratios = [theorem2_breakdown(n, p).ratio_to_true for p in range(2, 21)]
        assert min(ratios) > 1
        assert all(b > a for a, b in zip(ratios, ratios[1:]))


def test_derivative_value():
    expected = math.log(0.8) * 0.64 * (-0.5 / 11)
    assert theorem2_derivative_in_p(10, 2) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(0.006492, abs=1e-6)


def test_derivative_positive():
    for n in range(4, 51):
        for p in range(1, 11):
            assert theorem2_derivative_in_p(n, p) > 0


def test_derivative_matches_finite_differences():
    h = 1e-5
    for n in (3, 5, 10, 50, 200):
        for p in (1.0, 2.0, 3.5, 10.0):
            fd = (expected_positive_region(n, p + h) - expected_positive_region(n, p - h)) / (2 * h)
            assert abs(fd - theorem2_derivative_in_p(n, p)) < 1e-8


def test_derivative_rejects_small_n():
    with pytest.raises(ValueError):
        theorem2_derivative_in_p(2, 1.0)


def test_theorem3_examples():
    assert theorem3_expected_prevalence(SplitSummary(10, 3, 7, 2, 1)) == pytest.approx(0.3095, abs=5e-5)
    assert theorem3_expected_prevalence(SplitSummary(4, 2, 2, 1, 1)) == pytest.approx(0.5)
    val = theorem3_expected_prevalence(SplitSummary(10, 9, 1, 0, 1), exact=True)
    assert val == Fraction(3, 22)
    assert val == theorem1_breakdown(10, exact=True).e_size_extreme


@pytest.mark.parametrize("args", [(10, 0, 10, 0, 1), (10, 3, 6, 1, 1), (10, 3, 7, 4, 0),
                                  (4, 2, 2, 2, 2)])
def test_split_summary_invariants(args):
    with pytest.raises(ValueError):
        SplitSummary(*args)


def _all_summaries(max_n):
    for n in range(2, max_n + 1):
        for i in range(1, n):
            j = n - i
            for a in range(i + 1):
                for k in range(j + 1):
                    if a + k <= n - 1:
                        yield SplitSummary(n, i, j, a, k)


def test_theorem3_reflection_symmetry_exhaustive():
    for s in _all_summaries(30):
        left = Fraction(2 * s.j + 1, 2 * (s.n + 1))
        mirrored = Fraction(s.k, s.j) * left + Fraction(s.a, s.i) * (1 - left)
        assert theorem3_expected_prevalence(s, exact=True) == mirrored
        assert theorem3_expected_prevalence(s.mirrored(), exact=True) == mirrored


def test_theorem3_range():
    for s in _all_summaries(20):
        v = theorem3_expected_prevalence(s, exact=True)
        lo, hi = sorted((Fraction(s.a, s.i), Fraction(s.k, s.j)))
        assert lo <= v <= hi


def test_order_statistic_midpoint_oracle():
    rng = np.random.default_rng(11)
    n, draws = 10, 1_000_000
    u = np.sort(rng.random((draws, n)), axis=1)
    for i in range(1, n):
        mid = 0.5 * (u[:, i - 1] + u[:, i])
        se = mid.std(ddof=1) / math.sqrt(draws)
        assert abs(mid.mean() - expected_left_fraction(i, n)) < 3 * se


def test_logistic_intercept_bias():
    bias = logistic_intercept_bias(500, 0.02)
    assert bias == pytest.approx(-0.049, abs=5e-4)
    assert logistic_intercept_bias(123, 0.5) == 0
    p = 1 / (1 + math.exp(-(0.0 + round(bias, 3))))
    assert p == pytest.approx(0.488, abs=5e-4)


@pytest.mark.parametrize("pi", [0.0, 1.0, -0.1, 1.5])
def test_logistic_intercept_bias_rejects(pi):
    with pytest.raises(ValueError):
        logistic_intercept_bias(10, pi)

"""Closed-form bias calculators for single-split and single-positive trees.

Every quantity assumes Uniform(0, 1) predictors. Functions accept
``exact=True`` to return :class:`fractions.Fraction` values; this is only
meaningful where the formula is rational (it is everywhere except the
derivative in ``p``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Number = Union[float, Fraction]


@dataclass(frozen=True)
class SplitSummary:
    """One binary split along a single predictor.

    ``i``/``j`` are the left/right sizes and ``a``/``k`` the positives on
    each side.
    """

    n: int
    i: int
    j: int
    a: int
    k: int

    def __post_init__(self):
        if self.i < 1 or self.j < 1 or self.i + self.j != self.n:
            raise ValueError(f"need i, j >= 1 and i + j = n, got {self}")
        if not (0 <= self.a <= self.i and 0 <= self.k <= self.j):
            raise ValueError(f"positive counts out of range: {self}")
        if self.a + self.k > self.n - 1:
            raise ValueError(f"need m = a + k <= n - 1, got {self}")

    @property
    def m(self) -> int:
        return self.a + self.k

    def mirrored(self) -> "SplitSummary":
        return SplitSummary(self.n, self.j, self.i, self.k, self.a)


@dataclass(frozen=True)
class Theorem2Breakdown:
    """Expected size of the positive region, split by extremeness of the positive case."""

    p_extreme: Number
    e_size_extreme: Number
    e_size_not_extreme: Number
    e_size_overall: Number
    ratio_to_true: Number


def _check_n(n: int) -> None:
    if int(n) != n or n < 3:
        raise ValueError(f"n must be an integer >= 3, got {n!r}")


def _one(exact: bool) -> Number:
    return Fraction(1) if exact else 1.0


def theorem1_breakdown(n: int, *, exact: bool = False) -> Theorem2Breakdown:
    """Single predictor, single positive: the purity tree is unbiased."""
    return theorem2_breakdown(n, 1, exact=exact)


def theorem2_breakdown(n: int, p: int, *, exact: bool = False) -> Theorem2Breakdown:
    """Single positive, ``p`` predictors, tree restricted to one predictor.

    The tree splits on a predictor where the positive case is extreme if
    one exists, so the extreme branch has probability
    ``1 - ((n - 2) / n) ** p``.
    """
    _check_n(n)
    if int(p) != p or p < 1:
        raise ValueError(f"p must be an integer >= 1, got {p!r}")
    one = _one(exact)
    not_extreme = (one * (n - 2) / n) ** p
    p_extreme = one - not_extreme
    e_extreme = one * 3 / 2 / (n + 1)
    e_interior = one / (n + 1)
    overall = p_extreme * e_extreme + not_extreme * e_interior
    return Theorem2Breakdown(p_extreme, e_extreme, e_interior, overall, n * overall)


def theorem2_ratio_p2(n: int, *, exact: bool = False) -> Number:
    """Closed form ``(n^2 + 2n - 2) / (n^2 + n)`` of the two-predictor ratio."""
    _check_n(n)
    return _one(exact) * (n * n + 2 * n - 2) / (n * n + n)


def expected_positive_region(n: int, p: float) -> float:
    """Expected positive-region size as a smooth function of real ``p``."""
    _check_n(n)
    q = ((n - 2) / n) ** p
    return q / (n + 1) + (1.0 - q) * 1.5 / (n + 1)


def theorem2_derivative_in_p(n: int, p: float) -> float:
    """Partial derivative of :func:`expected_positive_region` with respect to ``p``."""
    if n <= 2:
        raise ValueError(f"n must exceed 2, got {n!r}")
    r = (n - 2) / n
    return math.log(r) * r**p * (-0.5 / (n + 1))


def expected_left_fraction(i: int, n: int, *, exact: bool = False) -> Number:
    """Mean midpoint between the i-th and (i+1)-th of n uniform order statistics."""
    return _one(exact) * (2 * i + 1) / (2 * (n + 1))


def theorem3_expected_prevalence(s: SplitSummary, *, exact: bool = False) -> Number:
    """Expected prevalence estimate of a tree given the split ``s``."""
    left = expected_left_fraction(s.i, s.n, exact=exact)
    one = _one(exact)
    return (one * s.a / s.i) * left + (one * s.k / s.j) * (one - left)


def logistic_intercept_bias(n: int, pi_bar: float) -> float:
    """Approximate small-sample bias of the logistic-regression intercept (log-odds)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    if not 0.0 < pi_bar < 1.0:
        raise ValueError(f"pi_bar must lie in (0, 1), got {pi_bar!r}")
    return (pi_bar - 0.5) / (n * pi_bar * (1.0 - pi_bar))

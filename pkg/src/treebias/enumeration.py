"""Exact expected prevalence by enumerating every ordering of the labels.

With one Uniform(0, 1) predictor unrelated to the label, all ``C(n, m)``
placements of the ``m`` positives among the sorted observations are
equally likely. For each placement the entropy-best split is found and
its expected prevalence taken from the single-split closed form; the
average over placements is exact.

Orderings are visited in lexicographic order of the positive positions
(the order of :func:`itertools.combinations`). Work is cut into fixed
rank ranges which are unranked directly, so the result does not depend
on how many workers process them.
"""
from __future__ import annotations

import itertools
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .analytic import SplitSummary, expected_left_fraction, theorem3_expected_prevalence
from .impurity import TIE_RTOL, side_cost_table, split_likelihood

log = logging.getLogger(__name__)

CHUNK_SIZE = 1 << 16
SOFT_MAX_N = 25


@dataclass(frozen=True)
class OrderingPattern:
    """Labels of the sorted observations along one predictor."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("pattern entries must be 0 or 1")
        object.__setattr__(self, "bits", bits)
        if not 1 <= self.m <= self.n - 1:
            raise ValueError(f"pattern needs both classes, got {bits}")

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def m(self) -> int:
        return sum(self.bits)


@dataclass(frozen=True)
class EnumerationResult:
    n: int
    m: int
    n_orderings: int
    mean_expected_prevalence: float | Fraction
    ratio_to_true: float | Fraction


def _as_bits(pattern) -> tuple[int, ...]:
    if isinstance(pattern, OrderingPattern):
        return pattern.bits
    return OrderingPattern(tuple(pattern)).bits


def split_for_ordering(pattern, *, tie_break: str = "left") -> SplitSummary:
    """Entropy-best split of an ordering; ties go to the smallest left size."""
    bits = np.asarray(_as_bits(pattern))
    n, m = bits.size, int(bits.sum())
    T = side_cost_table(n)
    i = np.arange(1, n)
    a = np.cumsum(bits)[:-1]
    cost = T[i, a] + T[n - i, m - a]
    ties = np.flatnonzero(cost <= cost.min() + TIE_RTOL * n)
    best = ties[0] if tie_break == "left" else ties[-1]
    return SplitSummary(n, int(i[best]), int(n - i[best]), int(a[best]), int(m - a[best]))


def split_for_ordering_exact(pattern) -> SplitSummary:
    """Same choice as :func:`split_for_ordering` using exact rational likelihoods."""
    bits = _as_bits(pattern)
    n, m = len(bits), sum(bits)
    best, best_val = None, None
    a = 0
    for i in range(1, n):
        a += bits[i - 1]
        val = split_likelihood(i, a, n, m)
        if best_val is None or val > best_val:
            best, best_val = (i, a), val
    i, a = best
    return SplitSummary(n, i, n - i, a, m - a)


def unrank_lex(rank: int, n: int, m: int) -> tuple[int, ...]:
    """Bits of the ``rank``-th m-subset of ``range(n)`` in lexicographic order."""
    if not 0 <= rank < math.comb(n, m):
        raise ValueError(f"rank {rank} out of range for C({n}, {m})")
    bits = []
    for pos in range(n):
        with_one = math.comb(n - pos - 1, m - 1) if m > 0 else 0
        if rank < with_one:
            bits.append(1)
            m -= 1
        else:
            rank -= with_one
            bits.append(0)
    return tuple(bits)


def rank_lex(bits: Sequence[int]) -> int:
    n, m = len(bits), sum(bits)
    rank = 0
    for pos, b in enumerate(bits):
        if b:
            m -= 1
        elif m > 0:
            rank += math.comb(n - pos - 1, m - 1)
    return rank


def unrank_lex_block(start: int, stop: int, n: int, m: int) -> np.ndarray:
    """Vectorised :func:`unrank_lex` for ranks ``start..stop-1``; rows are bit patterns."""
    rank = np.arange(start, stop, dtype=np.int64)
    remaining = np.full(rank.size, m, dtype=np.int64)
    bits = np.zeros((rank.size, n), dtype=np.int8)
    comb = np.array([[math.comb(c, r) if r >= 0 else 0 for r in range(-1, m + 1)]
                     for c in range(n + 1)], dtype=np.int64)
    for pos in range(n):
        # comb[c, r + 1] == C(c, r)
        with_one = comb[n - pos - 1, remaining]
        take = rank < with_one
        bits[:, pos] = take
        rank = np.where(take, rank, rank - with_one)
        remaining = remaining - take
    return bits


def _chunk_values(n: int, m: int, start: int, stop: int, tie_break: str) -> np.ndarray:
    bits = unrank_lex_block(start, stop, n, m)
    T = side_cost_table(n)
    i = np.arange(1, n)
    a = np.cumsum(bits[:, :-1], axis=1, dtype=np.int64)
    cost = T[i, a] + T[n - i, m - a]
    near = cost <= cost.min(axis=1, keepdims=True) + TIE_RTOL * n
    if tie_break == "left":
        idx = near.argmax(axis=1)
    else:
        idx = n - 2 - near[:, ::-1].argmax(axis=1)
    ii = idx + 1
    aa = a[np.arange(a.shape[0]), idx]
    left = (2 * ii + 1) / (2.0 * (n + 1))
    return aa / ii * left + (m - aa) / (n - ii) * (1.0 - left)


def _chunk_sum(args) -> float:
    n, m, start, stop, tie_break = args
    return math.fsum(_chunk_values(n, m, start, stop, tie_break))


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("TREEBIAS_WORKERS", "1"))
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    return workers


def _check_nm(n: int, m: int) -> None:
    if n < 2 or not 1 <= m < n:
        raise ValueError(f"need n >= 2 and 1 <= m < n, got n={n}, m={m}")
    if n > SOFT_MAX_N:
        log.warning("n=%d exceeds %d; C(n, m) = %d orderings", n, SOFT_MAX_N, math.comb(n, m))


def enumerate_expected_prevalence(n: int, m: int, *, workers: int | None = None,
                                  tie_break: str = "left",
                                  chunk_size: int = CHUNK_SIZE) -> EnumerationResult:
    """Average single-split expected prevalence over all orderings of ``m`` positives.

    ``chunk_size`` fixes the reduction tree; for a given value the result is
    bit-identical for any ``workers``.
    """
    _check_nm(n, m)
    if tie_break not in ("left", "right"):
        raise ValueError(f"tie_break must be 'left' or 'right', got {tie_break!r}")
    workers = resolve_workers(workers)
    total = math.comb(n, m)
    tasks = [(n, m, s, min(s + chunk_size, total), tie_break)
             for s in range(0, total, chunk_size)]
    if workers == 1 or len(tasks) == 1:
        sums = [_chunk_sum(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            sums = list(pool.map(_chunk_sum, tasks))
    mean = math.fsum(sums) / total
    return EnumerationResult(n, m, total, mean, mean * n / m)


def enumerate_expected_prevalence_exact(n: int, m: int) -> EnumerationResult:
    """Rational-arithmetic version of :func:`enumerate_expected_prevalence` (small n only)."""
    _check_nm(n, m)
    total = Fraction(0)
    count = 0
    for pos in itertools.combinations(range(n), m):
        bits = [0] * n
        for p in pos:
            bits[p] = 1
        total += theorem3_expected_prevalence(split_for_ordering_exact(bits), exact=True)
        count += 1
    mean = total / count
    return EnumerationResult(n, m, count, mean, mean * n / m)


def table3_grid(n_values: Sequence[int] = range(3, 26)) -> list[tuple[int, int]]:
    """All (n, m) with ``1 <= m <= ceil(n/2 - 1)``."""
    return [(n, m) for n in n_values for m in range(1, math.ceil(n / 2 - 1) + 1)]


def _segment_fraction(bits: tuple[int, ...], forced_extreme: bool = False) -> float:
    """Expected positive share of a segment split along one predictor until pure.

    A segment with a single case of one class uses the single-positive
    results directly: that case's region is ``1.5 / (n + 1)`` of the
    segment when it is extreme and ``1 / (n + 1)`` otherwise. Other impure
    segments are split by entropy and each side is again treated as a
    fresh set of uniform order statistics.
    """
    n, m = len(bits), sum(bits)
    if m == 0 or m == n:
        return float(m // n)
    if m == 1 or m == n - 1:
        minority = 1 if m == 1 else 0
        at = bits.index(minority)
        extreme = forced_extreme or at in (0, n - 1)
        share = (1.5 if extreme else 1.0) / (n + 1)
        return share if minority == 1 else 1.0 - share
    s = split_for_ordering(bits)
    left = expected_left_fraction(s.i, n)
    return left * _segment_fraction(bits[:s.i]) + (1.0 - left) * _segment_fraction(bits[s.i:])


def pure_chain_expected_prevalence(pattern) -> float:
    """Expected prevalence of a single-predictor tree grown to purity on ``pattern``."""
    return _segment_fraction(_as_bits(pattern))


def chain_with_secondary_extreme(pattern, p_total: int, *, side: str | None = None):
    """Pure-chain prevalence when the lone positive after the first split may be
    extreme on one of the other ``p_total - 1`` predictors.

    Returns ``(prev_extreme, prev_not_extreme, weighted)`` where the weight
    of the non-extreme value is ``((n' - 2) / n') ** (p_total - 1)`` for the
    ``n'``-point segment holding the lone positive.
    """
    bits = _as_bits(pattern)
    if p_total < 1:
        raise ValueError(f"p_total must be >= 1, got {p_total}")
    s = split_for_ordering(bits)
    halves = {"left": bits[:s.i], "right": bits[s.i:]}
    singles = [k for k, seg in halves.items() if sum(seg) == 1 and len(seg) >= 2]
    if side is None:
        if len(singles) != 1:
            raise ValueError("first split must leave exactly one side with a lone positive "
                             f"among negatives; got left={halves['left']}, right={halves['right']}")
        side = singles[0]
    elif side not in singles:
        raise ValueError(f"{side} side does not hold a lone positive among negatives")
    left = expected_left_fraction(s.i, len(bits))
    weights = {"left": left, "right": 1.0 - left}

    def total(extreme: bool) -> float:
        return sum(w * _segment_fraction(halves[k], forced_extreme=extreme and k == side)
                   for k, w in weights.items())

    prev_not = total(False)
    prev_ext = total(True)
    seg_n = len(halves[side])
    q = ((seg_n - 2) / seg_n) ** (p_total - 1)
    return prev_ext, prev_not, q * prev_not + (1.0 - q) * prev_ext

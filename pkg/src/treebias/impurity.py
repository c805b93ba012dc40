"""Entropy split cost shared by the tree builder and the enumerator.

Costs are unnormalised: ``i * H(a / i) + j * H(k / j)`` in nats, written
as ``c log c`` table lookups so that a split and its mirror image produce
bit-identical floats.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

# Two candidates whose costs differ by less than TIE_RTOL * n are a tie.
TIE_RTOL = 1e-10


def xlogx_table(n: int, base: float | None = None) -> np.ndarray:
    """``c * log(c)`` for ``c = 0..n`` with ``0 log 0 = 0``."""
    c = np.arange(n + 1, dtype=np.float64)
    out = np.zeros(n + 1)
    out[1:] = c[1:] * np.log(c[1:])
    if base is not None:
        out /= np.log(base)
    return out


def side_cost_table(n: int, base: float | None = None) -> np.ndarray:
    """``T[c, x] = c * H(x / c)`` for ``0 <= x <= c <= n`` (NaN elsewhere)."""
    L = xlogx_table(n, base)
    c = np.arange(n + 1)[:, None]
    x = np.arange(n + 1)[None, :]
    valid = x <= c
    T = np.full((n + 1, n + 1), np.nan)
    cc, xx = np.broadcast_arrays(c, x)
    T[valid] = L[cc[valid]] - L[xx[valid]] - L[cc[valid] - xx[valid]]
    return T


def binary_entropy(q, base: float | None = None):
    """H(q) with H(0) = H(1) = 0; natural log unless ``base`` is given."""
    q = np.asarray(q, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(np.where(q > 0, q * np.log(q), 0.0)
              + np.where(q < 1, (1 - q) * np.log1p(-q), 0.0))
    if base is not None:
        h = h / np.log(base)
    return h


def weighted_entropy(i: int, a: int, n: int, m: int, base: float | None = None) -> float:
    """Normalised split criterion ``(i/n) H(a/i) + (j/n) H(k/j)``."""
    j, k = n - i, m - a
    return float((i * binary_entropy(a / i, base) + j * binary_entropy(k / j, base)) / n)


def split_likelihood(i: int, a: int, n: int, m: int) -> Fraction:
    """``exp(-n * weighted_entropy)`` as an exact rational.

    Maximising this is the same as minimising the entropy criterion, and it
    needs no floating point, so it serves as an exact tie-aware oracle.
    """
    j, k = n - i, m - a

    def pw(x: int) -> int:
        return x**x if x else 1

    return Fraction(pw(a) * pw(i - a) * pw(k) * pw(j - k), pw(i) * pw(j))

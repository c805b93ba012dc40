"""Exact enumeration over label orderings with several positives.

Every ordering of m positives among n sorted observations is equally
likely when the predictor carries no signal. Averaging the single-split
expected prevalence over all of them shows a bias toward the minority
class that shrinks as m grows.
"""
import time

from treebias import enumeration
from treebias.report import enumeration_markdown

results = [enumeration.enumerate_expected_prevalence(n, m)
           for n, m in [(3, 1), (5, 1), (5, 2), (10, 1), (10, 2), (10, 3), (10, 4), (15, 7)]]
print(enumeration_markdown(results))

print("exact (3, 1):", enumeration.enumerate_expected_prevalence_exact(3, 1).ratio_to_true)

t0 = time.perf_counter()
big = enumeration.enumerate_expected_prevalence(25, 12)
print(f"(25, 12): {big.n_orderings} orderings, ratio {big.ratio_to_true:.4f}, "
      f"{time.perf_counter() - t0:.1f}s")

# One ordering followed to purity, then with a second predictor in play
pattern = (0, 1, 1, 0, 0, 0, 1, 0, 0, 0)
print("first split:", enumeration.split_for_ordering(pattern))
print("pure chain:", round(enumeration.pure_chain_expected_prevalence(pattern), 4))
print("(extreme, not extreme, weighted with 3 predictors):",
      tuple(round(v, 4) for v in enumeration.chain_with_secondary_extreme(pattern, 3)))

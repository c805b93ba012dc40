"""Closed-form bias of purity trees with a single positive case.

With one Uniform(0, 1) predictor the expected positive region is exactly
1/n, the true prevalence. With p >= 2 predictors the tree picks a
predictor on which the positive case is extreme whenever one exists, and
that tilts the expectation upward.
"""
from treebias import analytic, simulation
from treebias.report import table1_markdown

# One predictor: no bias
for n in (3, 10, 100):
    br = analytic.theorem1_breakdown(n, exact=True)
    print(f"n={n:>3}  E[region]={br.e_size_overall}  ratio={br.ratio_to_true}")

# Several predictors: the ratio exceeds 1 and grows with p
for p in (1, 2, 5, 20):
    print(f"n=10 p={p:>2}  ratio={analytic.theorem2_breakdown(10, p).ratio_to_true:.4f}  "
          f"d/dp={analytic.theorem2_derivative_in_p(10, p):.2e}")

# The analytic table for p = 2
print(table1_markdown(simulation.summarize_table1()))

# For contrast, the logistic-regression intercept bias at 2% prevalence and n = 500
print("logit intercept bias:", round(analytic.logistic_intercept_bias(500, 0.02), 4))

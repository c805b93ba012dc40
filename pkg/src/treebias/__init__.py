"""Prevalence bias of decision trees trained on imbalanced binary data."""
from .analytic import (SplitSummary, Theorem2Breakdown, logistic_intercept_bias,
                       theorem1_breakdown, theorem2_breakdown, theorem2_derivative_in_p,
                       theorem3_expected_prevalence)
from .dgp import Dataset, generate_constant_rate, generate_logit_dgp, generate_single_positive
from .enumeration import (OrderingPattern, chain_with_secondary_extreme,
                          enumerate_expected_prevalence, pure_chain_expected_prevalence,
                          split_for_ordering)
from .tree import (FitConfig, TreeModel, best_split, classify_tree_type, fit, predict,
                   prevalence_empirical, prevalence_integral_unit_cube)

__version__ = "0.1.0"

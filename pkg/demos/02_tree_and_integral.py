"""Fit a purity tree to single-positive data and integrate its output.

The prevalence estimate of a tree is the integral of its prediction over
the unit square, computed exactly from the leaf boxes.
"""
import numpy as np

from treebias import dgp, tree

data = dgp.generate_single_positive(n=10, p=2, seed=3)
model = tree.fit(data)

print(model.to_json(indent=2))
print("tree type:", tree.classify_tree_type(model))
print("split records:", model.split_records)
print("exact integral:", tree.prevalence_integral_unit_cube(model), " true prevalence: 0.1")

# Monte Carlo check of the same integral
pts = np.random.default_rng(0).random((200_000, 2))
print("MC integral:   ", tree.predict_many(model, pts).mean())

# Restricting every split to one feature gives the single-predictor tree
single = tree.fit(data, tree.FitConfig(restrict_to_feature=0))
print("restricted tree type:", tree.classify_tree_type(single))

"""Monte Carlo studies at reduced scale.

Single-positive trees on two uniform predictors, tallied by tree type,
and purity trees on the ten-predictor logit model with Normal or
lognormal features. Pass larger sizes for paper-scale runs; they take
much longer.
"""
from treebias import simulation
from treebias.report import appendix_markdown, single_positive_markdown

rep = simulation.run_single_positive_experiment(
    simulation.SinglePositiveConfig(iterations=5_000, master_seed=1))
print(single_positive_markdown(rep))
print(f"({rep.wall_time:.1f}s)")

for name in ("normal_a1", "lognormal_a1"):
    cfg = simulation.AppendixConfig(name, simulation.PAPER_B_VALUES[name][:3],
                                    n_train=20_000, n_test=20_000, runs=3, master_seed=1)
    print(appendix_markdown(simulation.run_appendix_experiment(cfg)))

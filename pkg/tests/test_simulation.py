import dataclasses
import logging
import math

import numpy as np
import pytest

from treebias.dgp import builtin_config, generate_logit_dgp
from treebias.simulation import (AppendixConfig, SinglePositiveConfig, TYPE_LABELS,
                                 run_appendix_experiment, run_single_positive_experiment,
                                 summarize_table1)


@pytest.fixture(scope="module")
def small_report():
    return run_single_positive_experiment(SinglePositiveConfig((10, 20), 2, 3000, 11))


def test_counts_sum_to_iterations(small_report):
    for row in small_report.rows:
        assert sum(s.count for s in row.types.values()) == 3000
        assert sum(s.proportion for s in row.types.values()) == pytest.approx(1.0)


def test_overall_is_weighted_type_ratio(small_report):
    for row in small_report.rows:
        weighted = sum(s.proportion * s.ratio_to_true for s in row.types.values() if s.count)
        assert row.overall_ratio == pytest.approx(weighted, rel=1e-12)


def test_no_three_split_trees(small_report):
    for row in small_report.rows:
        assert row["Type 4"].count == 0 and row["Other"].count == 0


def test_type1_ratio_near_analytic(small_report):
    row = small_report.row(10)
    s = row["Type 1"]
    assert abs(s.ratio_to_true - 15 / 11) < 4 * s.ratio_se
    q = 1 - 0.8**2
    assert abs(s.proportion - q) < 4 * math.sqrt(q * (1 - q) / 3000)


def test_deterministic_and_worker_independent(small_report):
    again = run_single_positive_experiment(SinglePositiveConfig((10, 20), 2, 3000, 11), workers=2)
    assert again == small_report
    other = run_single_positive_experiment(SinglePositiveConfig((10, 20), 2, 3000, 12))
    assert other != small_report


def test_config_validation():
    with pytest.raises(ValueError):
        SinglePositiveConfig(iterations=0)
    with pytest.raises(ValueError):
        SinglePositiveConfig(n_values=(2, 10))
    with pytest.raises(ValueError):
        AppendixConfig(runs=1)
    with pytest.raises(ValueError):
        AppendixConfig(dgp_name="uniform")


def test_single_feature_dimension():
    rep = run_single_positive_experiment(SinglePositiveConfig((8,), 1, 500, 0))
    row = rep.row(8)
    assert row["Type 3"].count == 0
    assert row.overall_ratio == pytest.approx(1.0, abs=4 * row.overall_se)


def test_summarize_table1():
    rows = {r["n"]: r for r in summarize_table1()}
    r20 = rows[20]
    assert (round(r20["type1_ratio"], 3), round(r20["type1_proportion"], 3),
            round(r20["type2_ratio"], 3), round(r20["overall"], 3)) == (1.429, 0.19, 0.952, 1.043)
    assert round(rows[50]["overall"], 3) == 1.019
    assert summarize_table1([10], p=1)[0]["overall"] == pytest.approx(1.0)


@pytest.fixture(scope="module")
def small_appendix():
    cfg = AppendixConfig("lognormal_a1", (0.6, 1.4), 4000, 4000, 3, 5)
    return cfg, run_appendix_experiment(cfg)


def test_appendix_layout(small_appendix):
    cfg, rows = small_appendix
    assert [r.b for r in rows] == [0.6, 1.4]
    for r in rows:
        assert len(r.ratios) == 3
        assert r.ratio_mean == pytest.approx(np.mean(r.ratios))
        assert r.ratio_sd == pytest.approx(np.std(r.ratios, ddof=1))
    assert rows[1].prevalence < rows[0].prevalence
    assert run_appendix_experiment(cfg) == rows


def test_appendix_worker_independent(small_appendix):
    cfg, rows = small_appendix
    assert run_appendix_experiment(cfg, workers=2) == rows


def test_perfect_oracle_control():
    d = generate_logit_dgp(200_000, builtin_config("normal_a1", 1.0), 3)
    ratio = d.labels.sum() / d.true_probs.sum()
    se = math.sqrt((d.true_probs * (1 - d.true_probs)).sum()) / d.true_probs.sum()
    assert abs(ratio - 1) < 4 * se


def test_appendix_redraws_empty_training_set(caplog):
    cfg = AppendixConfig("normal_a1", (2.4,), 10, 50, 2, 0)
    with caplog.at_level(logging.WARNING, logger="treebias.simulation"):
        rows = run_appendix_experiment(cfg)
    assert "no positives" in caplog.text
    assert math.isfinite(rows[0].ratio_mean)


def test_paper_scale_config():
    cfg = AppendixConfig.paper_scale("normal_a1", (0.2,))
    assert (cfg.n_train, cfg.n_test, cfg.runs) == (1_000_000, 1_000_000, 50)
    assert dataclasses.replace(cfg, runs=2).runs == 2


def test_type_labels():
    assert TYPE_LABELS[:4] == ("Type 1", "Type 2", "Type 3", "Type 4")

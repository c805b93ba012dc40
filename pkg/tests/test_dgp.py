import math

import numpy as np
import pytest
from scipy import stats

from treebias.dgp import (BUILTIN_CONFIGS, Dataset, LogitDgpConfig, PredictorSpec,
                          builtin_config, eq_a1_logit, generate_constant_rate,
                          generate_logit_dgp, generate_single_positive)


def test_single_positive_shape():
    d = generate_single_positive(10, 2, 3)
    assert d.features.shape == (10, 2)
    assert d.m == 1 and d.labels[0] == 1
    assert ((d.features > 0) & (d.features < 1)).all()


def test_single_positive_minimal():
    d = generate_single_positive(3, 1, 0)
    assert d.features.shape == (3, 1) and d.m == 1


def test_single_positive_deterministic():
    a = generate_single_positive(20, 3, (1, 2, 3))
    b = generate_single_positive(20, 3, (1, 2, 3))
    assert a.features.tobytes() == b.features.tobytes()
    assert a.labels.tobytes() == b.labels.tobytes()
    assert generate_single_positive(20, 3, (1, 2, 4)).features.tobytes() != a.features.tobytes()


@pytest.mark.parametrize("n,p", [(2, 1), (5, 0)])
def test_single_positive_rejects(n, p):
    with pytest.raises(ValueError):
        generate_single_positive(n, p, 0)


@pytest.mark.parametrize("n,m,p", [(10, 3, 1), (5, 2, 2)])
def test_constant_rate_counts(n, m, p):
    d = generate_constant_rate(n, m, p, 9)
    assert d.m == m and d.features.shape == (n, p)


@pytest.mark.parametrize("m", [0, 10, 11])
def test_constant_rate_rejects(m):
    with pytest.raises(ValueError):
        generate_constant_rate(10, m, 1, 0)


def test_constant_rate_positions_uniform():
    n, m = 10, 3
    counts = np.zeros(n)
    for s in range(100_000):
        counts += generate_constant_rate(n, m, 1, s).labels
    _, pvalue = stats.chisquare(counts)
    assert pvalue > 1e-3


def _logit_by_hand(x, b):
    x1, x2, x3, x4, x5, x6, x7, x8, x9, x10 = x
    terms = [x1, x2, x3, x4, x5, x6, x7, x8, x9, x10,
             x1 * x3, x2 * x5, x4 * x9, x6 * x7, x8 * x10,
             x1 * x2 * x3 * x4, x1 * x2 * x9 * x10]
    total = 0.0
    for t in terms:
        total += t
    return math.log(99) / 40 * total - b * math.log(99)


def test_logit_examples():
    assert eq_a1_logit(np.zeros(10), 0) == 0
    assert 1 / (1 + math.exp(-eq_a1_logit(np.zeros(10), 1))) == pytest.approx(0.01)
    assert eq_a1_logit(np.ones(10), 0) == pytest.approx(17 * math.log(99) / 40)


def test_logit_matches_term_by_term():
    rng = np.random.default_rng(0)
    X = rng.normal(0, 2, size=(1000, 10))
    bs = rng.uniform(-1, 3, size=1000)
    for x, b in zip(X, bs):
        assert abs(eq_a1_logit(x, b) - _logit_by_hand(x, b)) < 1e-12
    vec = eq_a1_logit(X, 0.5)
    assert np.allclose(vec, [_logit_by_hand(x, 0.5) for x in X], rtol=0, atol=1e-12)


def test_logit_rejects_length():
    with pytest.raises(ValueError):
        eq_a1_logit(np.zeros(9), 0)


def test_logit_config_needs_ten():
    with pytest.raises(ValueError):
        LogitDgpConfig(BUILTIN_CONFIGS["normal_a1"][:9], 1.0)


@pytest.mark.parametrize("spec", [("uniform", 1, 1), ("normal", 0, 0), ("lognormal", 0, -1),
                                  ("gamma", 1, 1)])
def test_predictor_spec_rejects(spec):
    with pytest.raises(ValueError):
        PredictorSpec(*spec)


@pytest.mark.parametrize("name,b,prev", [("normal_a1", 0.2, 0.465), ("lognormal_a1", 1.0, 0.110)])
def test_logit_prevalence_matches_published(name, b, prev):
    d = generate_logit_dgp(100_000, builtin_config(name, b), 4)
    assert abs(d.labels.mean() - prev) < 0.01


def test_logit_prevalence_decreasing_in_b():
    d1 = generate_logit_dgp(50_000, builtin_config("lognormal_a1", 1.0), 8)
    d2 = generate_logit_dgp(50_000, builtin_config("lognormal_a1", 2.0), 8)
    assert d2.true_probs.mean() < d1.true_probs.mean()
    assert d2.labels.mean() < d1.labels.mean()


def test_true_probs_open_interval_and_monotone():
    X = generate_logit_dgp(5000, builtin_config("normal_a1", 0.0), 2).features
    means = []
    for b in np.linspace(-1, 3, 9):
        p = 1 / (1 + np.exp(-eq_a1_logit(X, b)))
        assert ((p > 0) & (p < 1)).all()
        means.append(p.mean())
    assert all(b < a for a, b in zip(means, means[1:]))


def test_logit_dgp_deterministic():
    cfg = builtin_config("normal_a1", 1.0)
    a, b = generate_logit_dgp(1000, cfg, 5), generate_logit_dgp(1000, cfg, 5)
    assert a.features.tobytes() == b.features.tobytes()
    assert a.labels.tobytes() == b.labels.tobytes()


def test_unknown_builtin():
    with pytest.raises(ValueError):
        builtin_config("weibull", 1.0)


def test_dataset_validation():
    with pytest.raises(ValueError):
        Dataset(np.zeros((3, 1)), np.array([0, 2, 1]))
    with pytest.raises(ValueError):
        Dataset(np.zeros((3, 1)), np.array([0, 1]))
    with pytest.raises(ValueError):
        Dataset(np.array([[0.0], [np.nan]]), np.array([0, 1]))
    with pytest.raises(ValueError):
        Dataset(np.zeros((2, 1)), np.array([0, 1]), true_probs=np.array([0.5, 1.5]))

"""Synthetic data generators.

Every generator takes a ``seed`` that is either an int or a sequence of
ints; sequences such as ``(master_seed, n, iteration)`` give independent,
reproducible streams for parallel runs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from scipy.special import expit

Seed = Union[int, Sequence[int], np.random.SeedSequence]

LOG99 = math.log(99.0)


@dataclass(frozen=True)
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    true_probs: np.ndarray | None = None

    def __post_init__(self):
        X = np.ascontiguousarray(self.features, dtype=np.float64)
        if X.ndim == 1:
            X = X[:, None]
        y = np.ascontiguousarray(self.labels).astype(np.int8)
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise ValueError(f"features {X.shape} and labels {y.shape} do not line up")
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError("dataset needs at least one row and one feature")
        if not np.isfinite(X).all():
            raise ValueError("features must be finite")
        if not ((y == 0) | (y == 1)).all():
            raise ValueError("labels must be 0 or 1")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        if self.true_probs is not None:
            p = np.asarray(self.true_probs, dtype=np.float64)
            if p.shape != y.shape or ((p < 0) | (p > 1)).any():
                raise ValueError("true_probs must match labels and lie in [0, 1]")
            object.__setattr__(self, "true_probs", p)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    @property
    def m(self) -> int:
        return int(self.labels.sum())


def open_uniform(rng: np.random.Generator, size) -> np.ndarray:
    """Uniform draws on the open interval (0, 1)."""
    return (rng.integers(0, 1 << 53, size=size) + 0.5) / float(1 << 53)


def generate_single_positive(n: int, p: int, seed: Seed) -> Dataset:
    """``n`` rows of ``p`` Uniform(0, 1) features; row 0 is the only positive.

    Rows are exchangeable, so fixing the positive at row 0 is the same as
    picking it at random.
    """
    if n < 3 or p < 1:
        raise ValueError(f"need n >= 3 and p >= 1, got n={n}, p={p}")
    rng = np.random.default_rng(seed)
    y = np.zeros(n, dtype=np.int8)
    y[0] = 1
    return Dataset(open_uniform(rng, (n, p)), y)


def generate_constant_rate(n: int, m: int, p: int, seed: Seed) -> Dataset:
    """Uniform features with exactly ``m`` positives placed independently of them."""
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= m < n, got n={n}, m={m}")
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    rng = np.random.default_rng(seed)
    X = open_uniform(rng, (n, p))
    y = np.zeros(n, dtype=np.int8)
    y[rng.choice(n, size=m, replace=False)] = 1
    return Dataset(X, y)


@dataclass(frozen=True)
class PredictorSpec:
    kind: str
    loc: float
    scale: float

    def __post_init__(self):
        if self.kind == "uniform":
            if not self.scale > self.loc:
                raise ValueError("uniform needs hi > lo")
        elif self.kind in ("normal", "lognormal"):
            if not self.scale > 0:
                raise ValueError(f"{self.kind} needs a positive scale")
        else:
            raise ValueError(f"unknown predictor kind {self.kind!r}")

    @classmethod
    def uniform(cls, lo: float = 0.0, hi: float = 1.0) -> "PredictorSpec":
        return cls("uniform", lo, hi)

    @classmethod
    def normal(cls, mean: float, sd: float) -> "PredictorSpec":
        return cls("normal", mean, sd)

    @classmethod
    def lognormal(cls, log_mean: float, log_sd: float) -> "PredictorSpec":
        return cls("lognormal", log_mean, log_sd)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "uniform":
            return self.loc + (self.scale - self.loc) * open_uniform(rng, size)
        if self.kind == "normal":
            return rng.normal(self.loc, self.scale, size)
        return rng.lognormal(self.loc, self.scale, size)


@dataclass(frozen=True)
class LogitDgpConfig:
    predictor_specs: tuple[PredictorSpec, ...]
    b: float
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        if len(self.predictor_specs) != 10:
            raise ValueError(f"need exactly 10 predictors, got {len(self.predictor_specs)}")


NORMAL_A1 = (
    (0.5, 0.5), (0.5, 0.8), (-0.2, 1.0), (-0.1, 0.9), (0.0, 5.0),
    (0.0, 3.0), (2.0, 4.0), (3.0, 7.0), (1.5, 3.0), (0.0, 2.0),
)
LOGNORMAL_A1 = (
    (0.05, 0.05), (0.05, 0.08), (-0.02, 0.1), (-0.01, 0.09), (0.2, 0.5),
    (0.0, 0.3), (0.2, 0.4), (0.3, 0.7), (0.15, 0.3), (0.0, 0.2),
)
BUILTIN_CONFIGS = {
    "normal_a1": tuple(PredictorSpec.normal(*ms) for ms in NORMAL_A1),
    "lognormal_a1": tuple(PredictorSpec.lognormal(*ms) for ms in LOGNORMAL_A1),
}


def builtin_config(name: str, b: float) -> LogitDgpConfig:
    try:
        specs = BUILTIN_CONFIGS[name]
    except KeyError:
        raise ValueError(f"unknown DGP {name!r}; choose from {sorted(BUILTIN_CONFIGS)}") from None
    return LogitDgpConfig(specs, float(b), name)


def eq_a1_logit(x, b: float) -> np.ndarray | float:
    """Log-odds of success: 10 main effects, 5 pairwise and 2 four-way terms.

    ``x`` may be a single 10-vector or an ``(n, 10)`` matrix.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != 10:
        raise ValueError(f"expected 10 predictors, got {x.shape[-1]}")
    x1, x2, x3, x4, x5, x6, x7, x8, x9, x10 = np.moveaxis(x, -1, 0)
    s = (x.sum(axis=-1)
         + x1 * x3 + x2 * x5 + x4 * x9 + x6 * x7 + x8 * x10
         + x1 * x2 * x3 * x4 + x1 * x2 * x9 * x10)
    out = LOG99 / 40.0 * s - b * LOG99
    return float(out) if out.ndim == 0 else out


def generate_logit_dgp(n: int, config: LogitDgpConfig, seed: Seed) -> Dataset:
    """Features from ``config``, success probabilities from the logit model, Bernoulli labels."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    X = np.column_stack([spec.sample(rng, n) for spec in config.predictor_specs])
    probs = expit(eq_a1_logit(X, config.b))
    y = (rng.random(n) < probs).astype(np.int8)
    return Dataset(X, y, probs)

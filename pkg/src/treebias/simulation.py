"""Monte Carlo experiments: single-positive trees and the logit-model study.

Iteration ``t`` for dataset size ``n`` always draws from the stream seeded
by ``(master_seed, n, t)``. Work is split into fixed iteration blocks and
reduced in block order, so reports do not depend on the worker count.
"""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytic, dgp, tree
from .enumeration import resolve_workers

log = logging.getLogger(__name__)

BLOCK = 5000
TYPE_LABELS = ("Type 1", "Type 2", "Type 3", "Type 4", "Other")
PAPER_ITERATIONS = 500_000


@dataclass(frozen=True)
class SinglePositiveConfig:
    n_values: tuple[int, ...] = (10, 20, 30, 40, 50)
    p: int = 2
    iterations: int = 20_000
    master_seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if any(n < 3 for n in self.n_values):
            raise ValueError("every n must be >= 3")
        if self.p < 1:
            raise ValueError("p must be >= 1")


@dataclass(frozen=True)
class TypeStats:
    tree_type: str
    count: int
    proportion: float
    mean_positive_region: float | None
    ratio_to_true: float | None
    ratio_se: float | None


@dataclass(frozen=True)
class SizeReport:
    n: int
    types: dict[str, TypeStats]
    overall_ratio: float
    overall_se: float

    def __getitem__(self, label: str) -> TypeStats:
        return self.types[label]


@dataclass(frozen=True)
class ExperimentReport:
    config: SinglePositiveConfig
    rows: list[SizeReport]
    wall_time: float = field(compare=False)

    @property
    def seed(self) -> int:
        return self.config.master_seed

    def row(self, n: int) -> SizeReport:
        return next(r for r in self.rows if r.n == n)


def _type_code(tt: tree.TreeType) -> int:
    return TYPE_LABELS.index(tt.label) if tt.label in TYPE_LABELS[:4] else 4


def _single_positive_block(args):
    n, p, seed, start, stop = args
    codes = np.empty(stop - start, dtype=np.int8)
    regions = np.empty(stop - start)
    for k, t in enumerate(range(start, stop)):
        model = tree.fit(dgp.generate_single_positive(n, p, (seed, n, t)))
        codes[k] = _type_code(tree.classify_tree_type(model))
        regions[k] = tree.prevalence_integral_unit_cube(model)
    return codes, regions


def _stats(label: str, regions: np.ndarray, n: int, total: int) -> TypeStats:
    c = regions.size
    if c == 0:
        return TypeStats(label, 0, 0.0, None, None, None)
    mean = math.fsum(regions) / c
    se = float(regions.std(ddof=1)) * n / math.sqrt(c) if c > 1 else None
    return TypeStats(label, c, c / total, mean, mean * n, se)


def run_single_positive_experiment(config: SinglePositiveConfig = SinglePositiveConfig(),
                                   *, workers: int | None = None) -> ExperimentReport:
    """Fit purity trees to single-positive uniform data and tally tree types.

    For each tree the positive region is integrated exactly over the unit
    square; ratios are mean region size times ``n``.
    """
    workers = resolve_workers(workers)
    t0 = time.perf_counter()
    tasks = [(n, config.p, config.master_seed, s, min(s + BLOCK, config.iterations))
             for n in config.n_values for s in range(0, config.iterations, BLOCK)]
    if workers == 1:
        results = [_single_positive_block(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_single_positive_block, tasks))
    rows = []
    for n in config.n_values:
        parts = [r for t, r in zip(tasks, results) if t[0] == n]
        codes = np.concatenate([c for c, _ in parts])
        regions = np.concatenate([r for _, r in parts])
        types = {label: _stats(label, regions[codes == c], n, codes.size)
                 for c, label in enumerate(TYPE_LABELS)}
        if types["Type 4"].count or types["Other"].count:
            log.info("n=%d: %d three-split and %d other trees", n,
                     types["Type 4"].count, types["Other"].count)
        overall = _stats("Overall", regions, n, codes.size)
        rows.append(SizeReport(n, types, overall.ratio_to_true, overall.ratio_se))
    return ExperimentReport(config, rows, time.perf_counter() - t0)


def summarize_table1(n_values=(10, 20, 30, 40, 50), p: int = 2) -> list[dict]:
    """Analytic single-positive ratios, treating two-split trees as same-feature trees."""
    if p < 2:
        log.debug("p=%d: only same-feature trees are possible", p)
    out = []
    for n in n_values:
        br = analytic.theorem2_breakdown(n, p)
        out.append({
            "n": n,
            "type1_ratio": n * br.e_size_extreme,
            "type1_proportion": br.p_extreme,
            "type2_ratio": n * br.e_size_not_extreme,
            "overall": br.ratio_to_true,
        })
    return out


@dataclass(frozen=True)
class AppendixConfig:
    dgp_name: str = "normal_a1"
    b_values: tuple[float, ...] = (0.2, 0.6, 1.0, 2.0, 2.4)
    n_train: int = 100_000
    n_test: int = 100_000
    runs: int = 10
    master_seed: int = 0

    def __post_init__(self):
        if self.dgp_name not in dgp.BUILTIN_CONFIGS:
            raise ValueError(f"unknown DGP {self.dgp_name!r}")
        if self.n_train < 2 or self.n_test < 1:
            raise ValueError("dataset sizes must be positive")
        if self.runs < 2:
            raise ValueError("runs must be >= 2 to report a standard deviation")

    @classmethod
    def paper_scale(cls, dgp_name: str, b_values, master_seed: int = 0) -> "AppendixConfig":
        return cls(dgp_name, tuple(b_values), 1_000_000, 1_000_000, 50, master_seed)


PAPER_B_VALUES = {
    "normal_a1": (0.2, 0.6, 1.0, 2.0, 2.4),
    "lognormal_a1": (0.6, 0.8, 1.0, 1.4, 2.0),
}


@dataclass(frozen=True)
class AppendixRow:
    dgp: str
    b: float
    prevalence: float
    ratio_mean: float
    ratio_sd: float
    ratios: tuple[float, ...] = field(repr=False, default=())


def _b_key(b: float) -> int:
    return int(round(b * 1_000_000))


def _appendix_run(args) -> tuple[float, float]:
    name, b, n_train, n_test, seed, run = args
    cfg = dgp.builtin_config(name, b)
    dgp_idx = sorted(dgp.BUILTIN_CONFIGS).index(name)
    attempt = 0
    while True:
        train = dgp.generate_logit_dgp(n_train, cfg, (seed, dgp_idx, _b_key(b), run, 0, attempt))
        if train.m > 0:
            break
        log.warning("%s b=%g run %d: no positives in training set, redrawing", name, b, run)
        attempt += 1
    test = dgp.generate_logit_dgp(n_test, cfg, (seed, dgp_idx, _b_key(b), run, 1, attempt))
    model = tree.fit(train)
    _, ratio = tree.prevalence_empirical(model, test)
    return float(test.true_probs.mean()), ratio


def run_appendix_experiment(config: AppendixConfig = AppendixConfig(), *,
                            workers: int | None = None) -> list[AppendixRow]:
    """Purity trees on logit-model data; ratio of summed predictions to summed probabilities."""
    workers = resolve_workers(workers)
    tasks = [(config.dgp_name, b, config.n_train, config.n_test, config.master_seed, r)
             for b in config.b_values for r in range(config.runs)]
    if workers == 1:
        results = [_appendix_run(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_appendix_run, tasks))
    rows = []
    for bi, b in enumerate(config.b_values):
        chunk = results[bi * config.runs:(bi + 1) * config.runs]
        prev = np.array([c[0] for c in chunk])
        ratios = np.array([c[1] for c in chunk])
        rows.append(AppendixRow(config.dgp_name, b, float(prev.mean()), float(ratios.mean()),
                                float(ratios.std(ddof=1)), tuple(ratios.tolist())))
    return rows

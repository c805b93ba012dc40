"""Binary classification tree with entropy splits at midpoints.

The builder works on presorted index arrays (one row per feature) and
stably partitions them at each split, so a node never re-sorts. Nodes are
numbered in depth-first, left-first build order; that order is also the
order of ``split_records``.

Convention: a row goes left when ``x[feature] < threshold``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numba
import numpy as np

from .analytic import SplitSummary
from .dgp import Dataset
from .impurity import TIE_RTOL, side_cost_table


@dataclass(frozen=True)
class FitConfig:
    """Growth limits. ``fit_to_purity`` ignores ``max_depth`` and ``min_samples_split``."""

    fit_to_purity: bool = True
    max_depth: int | None = None
    min_samples_split: int = 2
    restrict_to_feature: int | None = None

    def __post_init__(self):
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be non-negative")


@dataclass(frozen=True)
class Leaf:
    n_total: int
    n_positive: int

    @property
    def prediction(self) -> float:
        return self.n_positive / self.n_total


@dataclass(frozen=True)
class Internal:
    feature_index: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Internal]


class TreeType(NamedTuple):
    label: str
    n_splits: int
    n_features: int

    def __str__(self):
        if self.label == "Other":
            return f"Other({self.n_splits}, {self.n_features})"
        return self.label


@dataclass(frozen=True, eq=False)
class TreeModel:
    """Fitted tree in flat-array form. ``feature[node] == -1`` marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    n_total: np.ndarray
    n_positive: np.ndarray
    depth: np.ndarray
    n_features: int
    n_train: int

    @property
    def n_nodes(self) -> int:
        return self.feature.size

    @property
    def is_leaf(self) -> np.ndarray:
        return self.feature < 0

    @property
    def value(self) -> np.ndarray:
        return self.n_positive / self.n_total

    @property
    def split_records(self) -> list[tuple[int, float, int]]:
        """``(feature, threshold, depth)`` for each split in build order."""
        idx = np.flatnonzero(self.feature >= 0)
        return [(int(self.feature[i]), float(self.threshold[i]), int(self.depth[i])) for i in idx]

    @property
    def root(self) -> TreeNode:
        return self.node(0)

    def node(self, i: int) -> TreeNode:
        if self.feature[i] < 0:
            return Leaf(int(self.n_total[i]), int(self.n_positive[i]))
        return Internal(int(self.feature[i]), float(self.threshold[i]),
                        self.node(self.left[i]), self.node(self.right[i]))

    def to_dict(self, i: int = 0) -> dict:
        if self.feature[i] < 0:
            return {"n": int(self.n_total[i]), "pos": int(self.n_positive[i]),
                    "pred": float(self.value[i])}
        return {"feature": int(self.feature[i]), "threshold": float(self.threshold[i]),
                "left": self.to_dict(self.left[i]), "right": self.to_dict(self.right[i])}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def candidate_splits(values: Sequence[float]) -> list[float]:
    """Midpoints between consecutive distinct sorted values."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        return []
    keep = v[1:] > v[:-1]
    return [_midpoint(lo, hi) for lo, hi in zip(v[:-1][keep], v[1:][keep])]


def _midpoint(lo: float, hi: float) -> float:
    t = 0.5 * (lo + hi)
    # Rounding may land on lo for adjacent floats; hi still keeps lo on the left.
    return float(hi) if t <= lo else float(t)


def _xy(data) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(data, Dataset):
        return data.features, data.labels
    X, y = data
    d = Dataset(X, y)
    return d.features, d.labels


def best_split(data, allowed_features: Sequence[int] | None = None):
    """Entropy-minimising split of one node.

    ``data`` is a :class:`Dataset` or an ``(X, y)`` pair holding only the
    node's rows. Returns ``(feature, threshold, SplitSummary)`` or ``None``
    when every allowed feature is constant. Ties go to the lowest feature
    index, then the smallest threshold.
    """
    X, y = _xy(data)
    n = y.size
    m = int(y.sum())
    if m == 0 or m == n:
        raise ValueError("best_split called on a pure node")
    features = range(X.shape[1]) if allowed_features is None else sorted(allowed_features)
    T = side_cost_table(n)
    cands = []
    for f in features:
        order = np.argsort(X[:, f], kind="stable")
        v = X[order, f]
        a = np.cumsum(y[order])[:-1]
        i = np.arange(1, n)
        ok = v[1:] > v[:-1]
        cost = T[i, a] + T[n - i, m - a]
        for pos in np.flatnonzero(ok):
            cands.append((cost[pos], f, pos, v[pos], v[pos + 1], int(a[pos])))
    if not cands:
        return None
    best = min(c[0] for c in cands)
    cost, f, pos, lo, hi, a = next(c for c in cands if c[0] <= best + TIE_RTOL * n)
    i = pos + 1
    return f, _midpoint(lo, hi), SplitSummary(n, i, n - i, a, m - a)


@numba.njit(cache=True)
def _build(X, y, order, allowed, min_split, max_depth):
    n, p = X.shape
    cap = 2 * n - 1
    feat = np.full(cap, -1, np.int64)
    thr = np.full(cap, np.nan)
    left = np.full(cap, -1, np.int64)
    right = np.full(cap, -1, np.int64)
    ntot = np.zeros(cap, np.int64)
    npos = np.zeros(cap, np.int64)
    dep = np.zeros(cap, np.int64)

    xlogx = np.zeros(n + 1)
    for c in range(1, n + 1):
        xlogx[c] = c * np.log(c)

    goes_left = np.zeros(n, np.bool_)
    buf = np.empty(n, np.int64)
    # stack rows: start, stop, depth, parent, side (0 left, 1 right)
    stack = np.empty((cap, 5), np.int64)
    stack[0, 0] = 0
    stack[0, 1] = n
    stack[0, 2] = 0
    stack[0, 3] = -1
    stack[0, 4] = 0
    top = 1
    count = 0
    while top > 0:
        top -= 1
        start, stop, d, parent, side = stack[top]
        node = count
        count += 1
        if parent >= 0:
            if side == 0:
                left[parent] = node
            else:
                right[parent] = node
        size = stop - start
        m = 0
        for t in range(start, stop):
            m += y[order[0, t]]
        ntot[node] = size
        npos[node] = m
        dep[node] = d
        if m == 0 or m == size or size < min_split or (max_depth >= 0 and d >= max_depth):
            continue

        tol = 1e-10 * size
        best = np.inf
        for f in range(p):
            if not allowed[f]:
                continue
            a = 0
            for t in range(start, stop - 1):
                a += y[order[f, t]]
                if X[order[f, t], f] < X[order[f, t + 1], f]:
                    i = t - start + 1
                    j = size - i
                    k = m - a
                    cost = (xlogx[i] - xlogx[a] - xlogx[i - a]) + (xlogx[j] - xlogx[k] - xlogx[j - k])
                    if cost < best:
                        best = cost
        if best == np.inf:
            continue
        bf = -1
        bt = -1
        for f in range(p):
            if bf >= 0:
                break
            if not allowed[f]:
                continue
            a = 0
            for t in range(start, stop - 1):
                a += y[order[f, t]]
                if X[order[f, t], f] < X[order[f, t + 1], f]:
                    i = t - start + 1
                    j = size - i
                    k = m - a
                    cost = (xlogx[i] - xlogx[a] - xlogx[i - a]) + (xlogx[j] - xlogx[k] - xlogx[j - k])
                    if cost <= best + tol:
                        bf = f
                        bt = t
                        break

        lo = X[order[bf, bt], bf]
        hi = X[order[bf, bt + 1], bf]
        mid = 0.5 * (lo + hi)
        if mid <= lo:
            mid = hi
        feat[node] = bf
        thr[node] = mid

        n_left = bt - start + 1
        for t in range(start, stop):
            goes_left[order[bf, t]] = t <= bt
        for f in range(p):
            li = start
            ri = 0
            for t in range(start, stop):
                s = order[f, t]
                if goes_left[s]:
                    order[f, li] = s
                    li += 1
                else:
                    buf[ri] = s
                    ri += 1
            for r in range(ri):
                order[f, li + r] = buf[r]

        # right pushed first so the left child is built first
        stack[top, 0] = start + n_left
        stack[top, 1] = stop
        stack[top, 2] = d + 1
        stack[top, 3] = node
        stack[top, 4] = 1
        top += 1
        stack[top, 0] = start
        stack[top, 1] = start + n_left
        stack[top, 2] = d + 1
        stack[top, 3] = node
        stack[top, 4] = 0
        top += 1

    return (feat[:count], thr[:count], left[:count], right[:count],
            ntot[:count], npos[:count], dep[:count])


def fit(data, config: FitConfig = FitConfig()) -> TreeModel:
    """Grow a tree by recursive entropy splitting."""
    X, y = _xy(data)
    n, p = X.shape
    allowed = np.ones(p, dtype=np.bool_)
    if config.restrict_to_feature is not None:
        if not 0 <= config.restrict_to_feature < p:
            raise ValueError(f"restrict_to_feature={config.restrict_to_feature} but p={p}")
        allowed[:] = False
        allowed[config.restrict_to_feature] = True
    if config.fit_to_purity:
        min_split, max_depth = 2, -1
    else:
        min_split = config.min_samples_split
        max_depth = -1 if config.max_depth is None else config.max_depth
    order = np.ascontiguousarray(np.argsort(X, axis=0, kind="stable").T)
    arrays = _build(X, y.astype(np.int64), order, allowed, min_split, max_depth)
    return TreeModel(*arrays, n_features=p, n_train=n)


def apply(model: TreeModel, X) -> np.ndarray:
    """Leaf index reached by each row of ``X``."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ValueError(f"expected rows of {model.n_features} features, got shape {X.shape}")
    node = np.zeros(X.shape[0], dtype=np.int64)
    active = np.flatnonzero(model.feature[node] >= 0)
    while active.size:
        nd = node[active]
        go_left = X[active, model.feature[nd]] < model.threshold[nd]
        node[active] = np.where(go_left, model.left[nd], model.right[nd])
        active = active[model.feature[node[active]] >= 0]
    return node


def predict_many(model: TreeModel, X) -> np.ndarray:
    return model.value[apply(model, X)]


def predict(model: TreeModel, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.n_features,):
        raise ValueError(f"expected {model.n_features} features, got shape {x.shape}")
    return float(predict_many(model, x[None, :])[0])


def leaf_boxes(model: TreeModel, lower: float = 0.0, upper: float = 1.0):
    """Yield ``(leaf, lo, hi)`` boxes of every leaf clipped to ``[lower, upper]^p``."""
    p = model.n_features
    stack = [(0, np.full(p, lower), np.full(p, upper))]
    while stack:
        node, lo, hi = stack.pop()
        f = model.feature[node]
        if f < 0:
            yield node, lo, hi
            continue
        t = model.threshold[node]
        lhi, rlo = hi.copy(), lo.copy()
        lhi[f] = min(hi[f], t)
        rlo[f] = max(lo[f], t)
        stack.append((model.right[node], rlo, hi))
        stack.append((model.left[node], lo, lhi))


@numba.njit(cache=True)
def _node_volumes(feature, threshold, left, right, p):
    # preorder numbering: a parent always precedes its children
    n_nodes = feature.size
    lo = np.zeros((n_nodes, p))
    hi = np.ones((n_nodes, p))
    vol = np.zeros(n_nodes)
    for node in range(n_nodes):
        v = 1.0
        for f in range(p):
            v *= max(hi[node, f] - lo[node, f], 0.0)
        vol[node] = v
        f = feature[node]
        if f >= 0:
            t = threshold[node]
            for c in (left[node], right[node]):
                lo[c] = lo[node]
                hi[c] = hi[node]
            hi[left[node], f] = min(hi[node, f], t)
            lo[right[node], f] = max(lo[node, f], t)
    return vol


def leaf_volumes(model: TreeModel) -> dict[int, float]:
    """Volume of each leaf's box inside the unit cube."""
    vol = _node_volumes(model.feature, model.threshold, model.left, model.right,
                        model.n_features)
    return {int(i): float(vol[i]) for i in np.flatnonzero(model.is_leaf)}


def prevalence_integral_unit_cube(model: TreeModel) -> float:
    """Integral of the tree's output over ``[0, 1]^p``."""
    vol = _node_volumes(model.feature, model.threshold, model.left, model.right,
                        model.n_features)
    leaves = model.is_leaf
    return float(np.dot(vol[leaves], model.value[leaves]))


def prevalence_empirical(model: TreeModel, test) -> tuple[float, float | None]:
    """Mean prediction on ``test`` and, if available, sum(pred) / sum(true_probs)."""
    if isinstance(test, Dataset):
        X, probs = test.features, test.true_probs
    else:
        X, probs = np.asarray(test, dtype=np.float64), None
    if X.shape[0] == 0:
        raise ValueError("empty test set")
    pred = predict_many(model, X)
    ratio = None if probs is None else float(pred.sum() / probs.sum())
    return float(pred.mean()), ratio


def classify_tree_type(model: TreeModel | Sequence[tuple]) -> TreeType:
    """Type 1: one split; 2: two on one feature; 3: two on two features; 4: three splits."""
    records = model.split_records if isinstance(model, TreeModel) else list(model)
    n_splits = len(records)
    n_feat = len({r[0] for r in records})
    if n_splits == 1:
        return TreeType("Type 1", 1, 1)
    if n_splits == 2:
        return TreeType("Type 2" if n_feat == 1 else "Type 3", 2, n_feat)
    if n_splits == 3:
        return TreeType("Type 4", 3, n_feat)
    return TreeType("Other", n_splits, n_feat)

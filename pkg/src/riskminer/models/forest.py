"""Random forest of CART trees grown on Gini impurity.

Each tree gets its own generator spawned from the forest seed before any
tree is grown, so the forest does not depend on the order (or the
parallelism) in which trees are built.  At every node ``mtry`` features
are drawn without replacement; among them the split with the lowest
weighted child impurity wins, ties going to the lowest feature index and
then the lowest threshold.  Samples with ``x[f] <= threshold`` go left.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DimensionMismatch, LengthMismatch
from . import serialize
from .base import Classifier, class_index


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    max_depth: int | None = None
    min_leaf: int = 1
    mtry: int | None = None  # None -> ceil(sqrt(n_features))
    bootstrap: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ConfigError("n_trees must be >= 1")
        if self.min_leaf < 1:
            raise ConfigError("min_leaf must be >= 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise ConfigError("max_depth must be >= 0")


class Tree:
    """Flat arrays; ``feature == -1`` marks a leaf."""

    def __init__(self, feature, threshold, left, right, counts):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.counts = np.asarray(counts, dtype=np.int64)

    def __len__(self):
        return len(self.feature)

    def leaves(self, X):
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature[node] >= 0
        while active.any():
            idx = np.nonzero(active)[0]
            n = node[idx]
            go_left = X[idx, self.feature[n]] <= self.threshold[n]
            node[idx] = np.where(go_left, self.left[n], self.right[n])
            active = self.feature[node] >= 0
        return node

    def predict_index(self, X):
        return np.argmax(self.counts[self.leaves(X)], axis=1)


def _gini_rows(counts, totals):
    with np.errstate(invalid="ignore", divide="ignore"):
        p = counts / totals[..., None]
    return 1.0 - np.nansum(p * p, axis=-1)


def _best_split(X, y, idx, feats, n_classes, min_leaf):
    """(impurity, feature, threshold) of the best split, or None."""
    feats = np.sort(feats)
    xs = X[np.ix_(idx, feats)]
    order = np.argsort(xs, axis=0, kind="stable")
    xs = np.take_along_axis(xs, order, axis=0)
    onehot = np.eye(n_classes, dtype=np.int64)[y[idx]]
    left = np.cumsum(onehot[order], axis=0)           # (n, m, C)
    n = len(idx)
    total = left[-1]
    n_left = np.arange(1, n + 1)[:, None].astype(np.float64)
    imp = (n_left * _gini_rows(left, n_left)
           + (n - n_left) * _gini_rows(total - left, n - n_left)) / n
    valid = xs[:-1] < xs[1:]
    valid &= (n_left[:-1] >= min_leaf) & ((n - n_left[:-1]) >= min_leaf)
    imp = np.where(valid, imp[:-1], np.inf)
    if not np.isfinite(imp).any():
        return None
    best = None
    for j, f in enumerate(feats):
        col = imp[:, j]
        i = int(np.argmin(col))
        if not np.isfinite(col[i]):
            continue
        if best is None or col[i] < best[0]:
            lo, hi = xs[i, j], xs[i + 1, j]
            thr = lo + (hi - lo) / 2.0
            if not lo <= thr < hi:
                thr = lo
            best = (float(col[i]), int(f), float(thr))
    return best


def _grow_tree(X, y, n_classes, config, mtry, rng):
    n, n_features = X.shape
    idx = rng.integers(0, n, size=n) if config.bootstrap else np.arange(n)
    feature, threshold, left, right, counts = [], [], [], [], []

    def new_node(node_idx):
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        counts.append(np.bincount(y[node_idx], minlength=n_classes))
        return len(feature) - 1

    root = new_node(idx)
    stack = [(root, idx, 0)]
    while stack:
        node, node_idx, depth = stack.pop()
        if counts[node].max() == len(node_idx):
            continue
        if config.max_depth is not None and depth >= config.max_depth:
            continue
        if len(node_idx) < 2 * config.min_leaf:
            continue
        feats = rng.choice(n_features, size=mtry, replace=False)
        split = _best_split(X, y, node_idx, feats, n_classes, config.min_leaf)
        if split is None:
            continue
        _, f, thr = split
        go_left = X[node_idx, f] <= thr
        li, ri = new_node(node_idx[go_left]), new_node(node_idx[~go_left])
        feature[node], threshold[node], left[node], right[node] = f, thr, li, ri
        # push right first so the left subtree is expanded (and numbered) first
        stack.append((ri, node_idx[~go_left], depth + 1))
        stack.append((li, node_idx[go_left], depth + 1))
    return Tree(feature, threshold, left, right, np.array(counts))


class ForestModel(Classifier):
    kind = "forest"

    def __init__(self, classes, trees, n_features, config=ForestConfig()):
        self.classes = list(classes)
        self.trees = list(trees)
        self.n_features = int(n_features)
        self.config = config

    def votes(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(f"expected {self.n_features} features, got {X.shape[1]}")
        out = np.zeros((X.shape[0], len(self.classes)), dtype=np.int64)
        rows = np.arange(X.shape[0])
        for tree in self.trees:
            np.add.at(out, (rows, tree.predict_index(X)), 1)
        return out

    def scores(self, X):
        """Vote fractions per class."""
        return self.votes(X) / len(self.trees)

    def dumps(self):
        c = self.config
        hyper = {"F": self.n_features, "n_trees": len(self.trees),
                 "max_depth": "none" if c.max_depth is None else c.max_depth,
                 "min_leaf": c.min_leaf, "mtry": "auto" if c.mtry is None else c.mtry,
                 "bootstrap": int(c.bootstrap), "seed": c.seed}
        blocks = {}
        for t, tree in enumerate(self.trees):
            blocks[f"tree{t}.feature"] = tree.feature
            blocks[f"tree{t}.threshold"] = tree.threshold
            blocks[f"tree{t}.left"] = tree.left
            blocks[f"tree{t}.right"] = tree.right
            blocks[f"tree{t}.counts"] = tree.counts
        return serialize.dumps(self.kind, hyper, self.classes, blocks)

    @classmethod
    def loads(cls, text):
        _, hyper, classes, blocks = serialize.loads(text)
        trees = []
        for t in range(int(hyper["n_trees"])):
            p = f"tree{t}."
            trees.append(Tree(blocks[p + "feature"], blocks[p + "threshold"], blocks[p + "left"],
                              blocks[p + "right"], blocks[p + "counts"]))
        config = ForestConfig(
            n_trees=int(hyper["n_trees"]),
            max_depth=None if hyper["max_depth"] == "none" else int(hyper["max_depth"]),
            min_leaf=int(hyper["min_leaf"]),
            mtry=None if hyper["mtry"] == "auto" else int(hyper["mtry"]),
            bootstrap=bool(int(hyper["bootstrap"])),
            seed=int(hyper["seed"]),
        )
        return cls(classes, trees, int(hyper["F"]), config)


def train_forest(X, labels, config=ForestConfig(), n_jobs=1):
    """Grow ``config.n_trees`` trees; ``n_jobs > 1`` grows them on a thread pool."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if len(labels) != X.shape[0]:
        raise LengthMismatch(f"{X.shape[0]} rows but {len(labels)} labels")
    n_features = X.shape[1]
    mtry = config.mtry if config.mtry is not None else math.ceil(math.sqrt(n_features))
    if not 1 <= mtry <= n_features:
        raise ConfigError(f"mtry must lie in 1..{n_features}")
    classes, y = class_index(labels)
    seeds = np.random.SeedSequence(config.seed).spawn(config.n_trees)

    def grow(ss):
        return _grow_tree(X, y, len(classes), config, mtry, np.random.default_rng(ss))

    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            trees = list(pool.map(grow, seeds))
    else:
        trees = [grow(ss) for ss in seeds]
    return ForestModel(classes, trees, n_features, config)


def predict_forest(model, x):
    """``(label, vote fractions)`` for one feature vector; vote ties go to the smaller label."""
    return model.predict_one(x)

"""Cross-validated grid and random hyperparameter search.

A ``trainer(config, train_idx)`` returns a fitted model and a
``scorer(model, test_idx)`` returns a number where larger is better; both
close over the data themselves.  Results come back in enumeration order
whatever ``n_jobs`` is, and ties go to the earliest configuration.
"""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, EmptySpace
from .splits import fold_pairs, kfold


@dataclass(frozen=True)
class SearchResult:
    index: int
    config: dict
    mean_score: float
    fold_scores: tuple


def cross_val_scores(trainer, scorer, n, k=5, seed=0, config=None):
    folds = kfold(n, k, seed)
    scores = []
    for train_idx, test_idx in fold_pairs(folds):
        model = trainer(config, train_idx) if config is not None else trainer(train_idx)
        scores.append(float(scorer(model, test_idx)))
    return scores


def evaluate_configs(configs, trainer, scorer, n, k, seed, n_jobs):
    def run(item):
        i, cfg = item
        scores = cross_val_scores(trainer, scorer, n, k, seed, config=cfg)
        return SearchResult(i, cfg, float(np.mean(scores)), tuple(scores))

    items = list(enumerate(configs))
    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            table = list(pool.map(run, items))
    else:
        table = [run(it) for it in items]
    best = table[0]
    for row in table[1:]:
        if row.mean_score > best.mean_score:
            best = row
    return best.config, table


def grid_configs(space):
    if not space or any(len(v) == 0 for v in space.values()):
        raise EmptySpace("search space must name at least one parameter, each with values")
    names = list(space)
    return [dict(zip(names, combo)) for combo in itertools.product(*(space[n] for n in names))]


def grid_search(space, trainer, scorer, n, k=5, seed=0, n_jobs=1):
    """Score every point of the Cartesian product of ``space`` by mean k-fold CV score."""
    if k < 2:
        raise ConfigError("grid search needs k >= 2")
    return evaluate_configs(grid_configs(space), trainer, scorer, n, k, seed, n_jobs)


# --- samplers for random search --------------------------------------------

def uniform_int(low, high):
    """Integers in ``[low, high]``, both ends included."""
    return lambda rng: int(rng.integers(low, high + 1))


def uniform(low, high):
    return lambda rng: float(rng.uniform(low, high))


def log_uniform(low, high):
    lo, hi = math.log(low), math.log(high)
    return lambda rng: float(math.exp(rng.uniform(lo, hi)))


def choice(values):
    values = list(values)
    return lambda rng: values[int(rng.integers(len(values)))]


def draw_configs(space, n_draws, seed=0):
    """``n_draws`` configurations; parameters are drawn in ``space`` order.

    A sampler is a callable taking a ``numpy.random.Generator``; a plain
    list is sampled uniformly.
    """
    if not space:
        raise EmptySpace("search space must name at least one parameter")
    if n_draws < 1:
        raise ConfigError("n_draws must be >= 1")
    samplers = {name: (s if callable(s) else choice(s)) for name, s in space.items()}
    rng = np.random.default_rng(seed)
    return [{name: sample(rng) for name, sample in samplers.items()} for _ in range(n_draws)]


def random_search(space, n_draws, trainer, scorer, n, k=5, seed=0, n_jobs=1):
    if k < 2:
        raise ConfigError("random search needs k >= 2")
    return evaluate_configs(draw_configs(space, n_draws, seed), trainer, scorer, n, k, seed, n_jobs)

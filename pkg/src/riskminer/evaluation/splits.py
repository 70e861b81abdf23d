from dataclasses import dataclass

import numpy as np

from ..errors import BadK, BadRatios, LengthMismatch, TooFewSamples

DEFAULT_RATIOS = (0.70, 0.15, 0.15)


@dataclass(frozen=True)
class DataSplit:
    train: list
    val: list
    test: list

    def sizes(self):
        return len(self.train), len(self.val), len(self.test)


def largest_remainder(n, ratios):
    """Integer sizes summing to ``n``, proportional to ``ratios``.

    Floors first, then hands the leftover units to the largest fractional
    parts; equal remainders favour earlier entries.
    """
    quotas = [n * r for r in ratios]
    sizes = [int(np.floor(q)) for q in quotas]
    leftover = n - sum(sizes)
    order = sorted(range(len(ratios)), key=lambda i: (-(quotas[i] - sizes[i]), i))
    for i in order[:leftover]:
        sizes[i] += 1
    return sizes


def _check_ratios(ratios):
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or any(not r > 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise BadRatios(f"need three positive ratios summing to 1, got {ratios}")
    return ratios


def _ensure_nonempty(sizes):
    # tiny inputs can round a part down to zero; take one from the largest part
    for i, s in enumerate(sizes):
        if s == 0:
            j = int(np.argmax(sizes))
            sizes[j] -= 1
            sizes[i] += 1
    return sizes


def split(n, ratios=DEFAULT_RATIOS, seed=0, stratify_labels=None):
    """Train/validation/test index lists (each sorted ascending).

    Without labels: seeded shuffle, then contiguous cuts of the sizes given
    by ``largest_remainder``.  With labels: the same allocation is done per
    label, so every set keeps the label proportions as closely as rounding
    allows.
    """
    ratios = _check_ratios(ratios)
    if n < 3:
        raise TooFewSamples(f"need at least 3 samples to split, got {n}")
    rng = np.random.default_rng(seed)
    parts = ([], [], [])
    if stratify_labels is None:
        perm = rng.permutation(n)
        sizes = _ensure_nonempty(largest_remainder(n, ratios))
        bounds = np.cumsum([0] + sizes)
        for p in range(3):
            parts[p].extend(perm[bounds[p]:bounds[p + 1]].tolist())
    else:
        if len(stratify_labels) != n:
            raise LengthMismatch(f"{n} samples but {len(stratify_labels)} labels")
        labels = np.asarray(stratify_labels, dtype=object)
        for label in sorted(set(stratify_labels)):
            members = np.nonzero(labels == label)[0]
            members = members[rng.permutation(len(members))]
            sizes = largest_remainder(len(members), ratios)
            bounds = np.cumsum([0] + sizes)
            for p in range(3):
                parts[p].extend(members[bounds[p]:bounds[p + 1]].tolist())
        if any(not p for p in parts):
            raise TooFewSamples("stratified split left a set empty; use more samples")
    return DataSplit(*(sorted(int(i) for i in p) for p in parts))


def kfold(n, k, seed=0):
    """``k`` disjoint folds covering ``range(n)``; sizes differ by at most one."""
    if not 2 <= k <= n:
        raise BadK(f"k must satisfy 2 <= k <= n={n}, got {k}")
    perm = np.random.default_rng(seed).permutation(n)
    return [sorted(int(i) for i in fold) for fold in np.array_split(perm, k)]


def fold_pairs(folds):
    """(train, test) index lists for each fold held out in turn."""
    for i, test in enumerate(folds):
        train = sorted(j for f, fold in enumerate(folds) if f != i for j in fold)
        yield train, test

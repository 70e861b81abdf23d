from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riskminer.errors import (
    BadK,
    BadRatios,
    ConfigError,
    ConstantTarget,
    EmptyMatrix,
    EmptySpace,
    LengthMismatch,
    SingleClass,
    TooFewSamples,
    UnknownLabel,
)
from riskminer.evaluation import (
    ConfusionMatrix,
    confusion,
    draw_configs,
    grid_search,
    kfold,
    largest_remainder,
    metrics,
    random_search,
    regression_metrics,
    roc,
    roc_one_vs_rest,
    split,
    uniform_int,
)


def mann_whitney(truths, scores):
    """Fraction of (positive, negative) pairs ranked correctly, ties counted 1/2."""
    pos = [s for t, s in zip(truths, scores) if t]
    neg = [s for t, s in zip(truths, scores) if not t]
    wins = sum(1.0 if p > n else 0.5 if p == n else 0.0 for p in pos for n in neg)
    return wins / (len(pos) * len(neg))


class TestSplit:
    def test_sizes(self):
        assert split(10, (0.6, 0.2, 0.2), seed=0).sizes() == (6, 2, 2)

    def test_stratified(self):
        labels = ["A"] * 5 + ["B"] * 5
        s = split(10, (0.6, 0.2, 0.2), seed=1, stratify_labels=labels)
        assert Counter(labels[i] for i in s.train) == {"A": 3, "B": 3}

    def test_deterministic(self):
        assert split(50, seed=3) == split(50, seed=3)
        assert split(50, seed=3) != split(50, seed=4)

    def test_default_ratios(self):
        assert split(100).sizes() == (70, 15, 15)

    def test_errors(self):
        with pytest.raises(BadRatios):
            split(10, (0.5, 0.5, 0.1))
        with pytest.raises(BadRatios):
            split(10, (1.0, 0.0, 0.0))
        with pytest.raises(TooFewSamples):
            split(2)

    def test_largest_remainder(self):
        assert largest_remainder(10, (0.6, 0.2, 0.2)) == [6, 2, 2]
        assert largest_remainder(7, (0.7, 0.15, 0.15)) == [5, 1, 1]

    @settings(max_examples=100, deadline=None)
    @given(st.integers(3, 200), st.integers(0, 1000), st.booleans())
    def test_partition(self, n, seed, stratified):
        labels = [i % 3 for i in range(n)] if stratified and n >= 15 else None
        s = split(n, seed=seed, stratify_labels=labels)
        parts = [set(s.train), set(s.val), set(s.test)]
        assert sum(map(len, parts)) == n
        assert set().union(*parts) == set(range(n))
        assert all(parts)


class TestKfold:
    def test_sizes(self):
        assert [len(f) for f in kfold(10, 5)] == [2] * 5
        assert sorted(len(f) for f in kfold(10, 3)) == [3, 3, 4]

    def test_errors(self):
        with pytest.raises(BadK):
            kfold(10, 1)
        with pytest.raises(BadK):
            kfold(3, 4)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 100).flatmap(lambda n: st.tuples(st.just(n), st.integers(2, n))), st.integers(0, 99))
    def test_partition(self, nk, seed):
        n, k = nk
        folds = kfold(n, k, seed)
        flat = [i for f in folds for i in f]
        assert sorted(flat) == list(range(n))
        sizes = [len(f) for f in folds]
        assert max(sizes) - min(sizes) <= 1


class TestConfusionAndMetrics:
    def test_counting(self):
        cm = confusion(list("AABB"), list("ABBB"), ["A", "B"])
        assert cm.counts.tolist() == [[1, 1], [0, 2]]
        assert cm.total == 4

    def test_perfect_and_empty(self):
        assert confusion(list("ABC"), list("ABC")).counts.tolist() == np.eye(3).tolist()
        assert confusion([], [], ["A", "B"]).counts.tolist() == [[0, 0], [0, 0]]

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            confusion(["A"], [])
        with pytest.raises(UnknownLabel):
            confusion(["A"], ["C"], ["A", "B"])
        with pytest.raises(EmptyMatrix):
            metrics(confusion([], [], ["A"]))

    def test_binary_hand_values(self):
        report = metrics(ConfusionMatrix(("pos", "neg"), np.array([[8, 2], [2, 8]])))
        assert report.accuracy == pytest.approx(0.8)
        for lab in ("pos", "neg"):
            p, r, f, s = report.per_class[lab]
            assert (p, r, f, s) == pytest.approx((0.8, 0.8, 0.8, 10))
        assert report.f1 == pytest.approx(0.8)

    def test_diagonal(self):
        report = metrics(ConfusionMatrix(("a", "b", "c"), np.diag([3, 1, 2])))
        assert (report.accuracy, report.precision, report.recall, report.f1) == (1.0, 1.0, 1.0, 1.0)

    def test_never_predicted_flag(self):
        report = metrics(confusion(list("AAB"), list("AAA"), ["A", "B"]))
        assert report.per_class["B"][0] == 0.0
        assert report.never_predicted == ["B"]
        assert "never-predicted: B" in report.format()
        assert "never_predicted=B" in report.to_kv()

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.lists(st.integers(0, 20), min_size=3, max_size=3), min_size=3, max_size=3),
           st.permutations([0, 1, 2]))
    def test_matrix_properties(self, rows, perm):
        counts = np.array(rows)
        if counts.sum() == 0:
            return
        labels = ("a", "b", "c")
        report = metrics(ConfusionMatrix(labels, counts))
        assert report.accuracy == pytest.approx(np.trace(counts) / counts.sum(), abs=1e-15)
        for v in (report.accuracy, report.precision, report.recall, report.f1):
            assert 0.0 <= v <= 1.0
        permuted = metrics(ConfusionMatrix(tuple(labels[i] for i in perm), counts[np.ix_(perm, perm)]))
        for name in ("accuracy", "precision", "recall", "f1"):
            assert getattr(permuted, name) == pytest.approx(getattr(report, name), abs=1e-12)
        transposed = metrics(ConfusionMatrix(labels, counts.T))
        for lab in labels:
            p, r, _, _ = report.per_class[lab]
            tp, tr, _, _ = transposed.per_class[lab]
            assert (tp, tr) == pytest.approx((r, p), abs=1e-15)
        for p, r, f, _ in report.per_class.values():
            assert f == pytest.approx(2 * p * r / (p + r) if p + r else 0.0)


class TestRoc:
    def test_perfect(self):
        curve = roc([0, 0, 1, 1], [0.1, 0.2, 0.8, 0.9])
        assert curve.auc == 1.0
        assert (curve.fpr[0], curve.tpr[0], curve.fpr[-1], curve.tpr[-1]) == (0, 0, 1, 1)

    def test_ties_grouped(self):
        curve = roc([1, 0], [0.5, 0.5])
        assert curve.auc == 0.5
        assert len(curve.fpr) == 2

    def test_random_scores(self):
        rng = np.random.default_rng(0)
        auc = roc(rng.integers(0, 2, 10000), rng.random(10000)).auc
        assert 0.48 <= auc <= 0.52

    def test_single_class(self):
        with pytest.raises(SingleClass):
            roc([1, 1], [0.1, 0.2])

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.tuples(st.booleans(), st.integers(0, 6)), min_size=2, max_size=60))
    def test_mann_whitney_and_monotone_invariance(self, pairs):
        truths = [t for t, _ in pairs]
        if all(truths) or not any(truths):
            return
        scores = [float(s) for _, s in pairs]
        curve = roc(truths, scores)
        assert curve.auc == pytest.approx(mann_whitney(truths, scores), abs=1e-9)
        assert np.all(np.diff(curve.fpr) >= 0) and np.all(np.diff(curve.tpr) >= 0)
        assert roc(truths, np.exp(np.array(scores)) * 3 - 1).auc == curve.auc

    def test_one_vs_rest(self):
        y = ["a", "b", "c", "a"]
        s = np.array([[0.9, 0.1, 0.0], [0.1, 0.8, 0.1], [0.2, 0.2, 0.6], [0.7, 0.2, 0.1]])
        curves, macro = roc_one_vs_rest(y, s, ["a", "b", "c"])
        assert set(curves) == {"a", "b", "c"} and macro == 1.0

    def test_csv(self):
        assert roc([0, 1], [0.0, 1.0]).to_csv() == "fpr,tpr\n0.0,0.0\n0.0,1.0\n1.0,1.0\n"


class TestRegression:
    def test_examples(self):
        assert regression_metrics([1, 2, 3], [1, 2, 3]) == (0.0, 1.0)
        assert regression_metrics([1, 2, 3], [2, 2, 2])[1] == 0.0
        mse, r2 = regression_metrics([1, 2, 3], [1, 2, 5])
        assert mse == pytest.approx(4 / 3) and r2 == pytest.approx(-1.0)

    def test_errors(self):
        with pytest.raises(ConstantTarget):
            regression_metrics([2, 2], [1, 2])
        with pytest.raises(LengthMismatch):
            regression_metrics([], [])


def constant_scorer(value_of):
    return (lambda cfg, idx: cfg), (lambda model, idx: value_of(model))


class TestSearch:
    def test_grid_best(self):
        trainer, scorer = constant_scorer(lambda cfg: cfg["a"])
        best, table = grid_search({"a": [1, 2]}, trainer, scorer, n=10, k=2)
        assert best == {"a": 2} and len(table) == 2

    def test_grid_product_and_order(self):
        trainer, scorer = constant_scorer(lambda cfg: 0.0)
        best, table = grid_search({"a": [1, 2], "b": ["x", "y"]}, trainer, scorer, n=6, k=3)
        assert [r.config for r in table] == [{"a": 1, "b": "x"}, {"a": 1, "b": "y"},
                                             {"a": 2, "b": "x"}, {"a": 2, "b": "y"}]
        assert best == {"a": 1, "b": "x"}

    def test_parallel_same_table(self):
        trainer, scorer = constant_scorer(lambda cfg: -abs(cfg["a"] - 3))
        serial = grid_search({"a": list(range(6))}, trainer, scorer, n=10, k=2)
        threaded = grid_search({"a": list(range(6))}, trainer, scorer, n=10, k=2, n_jobs=4)
        assert serial == threaded and serial[0] == {"a": 3}

    def test_cv_uses_disjoint_folds(self):
        seen = []

        def trainer(cfg, idx):
            return set(idx)

        def scorer(train, test):
            seen.append(not (train & set(test)) and len(train) + len(test) == 10)
            return 0.0

        grid_search({"a": [1]}, trainer, scorer, n=10, k=5)
        assert seen == [True] * 5

    def test_errors(self):
        trainer, scorer = constant_scorer(lambda cfg: 0.0)
        with pytest.raises(EmptySpace):
            grid_search({}, trainer, scorer, n=10)
        with pytest.raises(EmptySpace):
            grid_search({"a": []}, trainer, scorer, n=10)
        with pytest.raises(ConfigError):
            grid_search({"a": [1]}, trainer, scorer, n=10, k=1)
        with pytest.raises(ConfigError):
            random_search({"a": [1]}, 0, trainer, scorer, n=10)

    def test_random_search(self):
        trainer, scorer = constant_scorer(lambda cfg: cfg["a"])
        best, table = random_search({"a": uniform_int(1, 3)}, 1, trainer, scorer, n=10, k=2, seed=5)
        assert len(table) == 1 and best == table[0].config
        assert draw_configs({"a": uniform_int(0, 100)}, 20, seed=9) == \
               draw_configs({"a": uniform_int(0, 100)}, 20, seed=9)

    def test_uniform_int_frequencies(self):
        draws = [c["a"] for c in draw_configs({"a": uniform_int(1, 3)}, 3000, seed=0)]
        freq = Counter(draws)
        assert set(freq) == {1, 2, 3}
        assert all(0.28 <= freq[v] / 3000 <= 0.38 for v in (1, 2, 3))

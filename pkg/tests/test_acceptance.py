"""Acceptance suite: one test per criterion, each under its runtime bound.

A pass/fail line per criterion is printed in the terminal summary.
"""

import datetime as dt
import itertools
import math
from collections import Counter
from importlib import resources

import numpy as np
import pytest

from riskminer.cli import run
from riskminer.corpus import FinancialRecord, ReportType, load_financial_records
from riskminer.evaluation import confusion, metrics, roc
from riskminer.features import Word2VecConfig, build_vocabulary, cosine_similarity, fit_idf, tfidf, train_word2vec
from riskminer.finance import debt_ratio, format_percent, liquidity_ratio, screen, trend_report
from riskminer.models import ForestConfig, train_forest, train_nb, train_svm
from riskminer.models.recurrent import init_params, loss_and_grads, numerical_gradient, pad_batch
from riskminer.pipeline import ComparisonSettings, comparison_table, run_comparison
from riskminer.synthetic import gaussian_blobs, planted_pair_corpus, risk_corpus, threshold_dataset, two_topic_corpus
from riskminer.topics import LdaConfig, fit_lda, top_terms


def test_01_tfidf_oracle(criterion):
    with criterion(1, "TF-IDF matches hand evaluation", 1):
        docs = [["risk", "loss"], ["risk", "market"], ["risk", "credit", "market"]]
        model = fit_idf(build_vocabulary(docs))
        idf = dict(zip(model.vocab.tokens, model.idf))
        n = 3
        hand_idf = {"credit": math.log(n / 2), "loss": math.log(n / 2),
                    "market": math.log(n / 3), "risk": math.log(n / 4)}
        for t, v in hand_idf.items():
            assert abs(idf[t] - v) <= 1e-9
        assert abs(idf["risk"] - (-0.287682)) < 1e-6
        doc = ["risk", "risk", "loss", "market", "unseen"]
        got = {model.vocab.tokens[i]: v for i, v in tfidf(doc, model).entries}
        hand = {t: doc.count(t) * hand_idf[t] for t in set(doc) if t in hand_idf}
        # market has idf ln(3/3) = 0, and sparse vectors omit zero weights
        hand = {t: v for t, v in hand.items() if v != 0}
        assert set(hand) == {"risk", "loss"}
        assert got.keys() == hand.keys()
        for t in hand:
            assert abs(got[t] - hand[t]) <= 1e-9


def test_02_metric_counting_oracle(criterion):
    with criterion(2, "confusion and metrics equal a counting oracle", 1):
        rng = np.random.default_rng(2024)
        labels = ["x", "y", "z"]
        truth = [labels[i] for i in rng.integers(0, 3, 500)]
        pred = [labels[i] for i in rng.integers(0, 3, 500)]
        cm = confusion(truth, pred, labels)
        for a, b in itertools.product(labels, labels):
            count = sum(1 for t, p in zip(truth, pred) if t == a and p == b)
            assert cm.counts[labels.index(a), labels.index(b)] == count
        report = metrics(cm)
        assert abs(report.accuracy - sum(t == p for t, p in zip(truth, pred)) / 500) <= 1e-12
        ps, rs, fs = [], [], []
        for c in labels:
            tp = sum(1 for t, p in zip(truth, pred) if t == c and p == c)
            fp = sum(1 for t, p in zip(truth, pred) if t != c and p == c)
            fn = sum(1 for t, p in zip(truth, pred) if t == c and p != c)
            p_c, r_c = tp / (tp + fp), tp / (tp + fn)
            f_c = 2 * p_c * r_c / (p_c + r_c)
            got = report.per_class[c]
            assert abs(got[0] - p_c) <= 1e-12 and abs(got[1] - r_c) <= 1e-12 and abs(got[2] - f_c) <= 1e-12
            ps.append(p_c)
            rs.append(r_c)
            fs.append(f_c)
        assert abs(report.precision - sum(ps) / 3) <= 1e-12
        assert abs(report.recall - sum(rs) / 3) <= 1e-12
        assert abs(report.f1 - sum(fs) / 3) <= 1e-12


def test_03_auc_mann_whitney(criterion):
    with criterion(3, "AUC equals the Mann-Whitney statistic", 5):
        rng = np.random.default_rng(3)
        for _ in range(100):
            n = int(rng.integers(2, 201))
            truth = rng.integers(0, 2, n)
            truth[:2] = [0, 1]
            # coarse integer scores force ties
            scores = rng.integers(0, int(rng.integers(2, 30)), n).astype(float)
            pos, neg = scores[truth == 1], scores[truth == 0]
            wins = sum(1.0 if p > q else 0.5 if p == q else 0.0 for p in pos for q in neg)
            assert abs(roc(truth, scores).auc - wins / (len(pos) * len(neg))) <= 1e-9
        truth = np.r_[np.zeros(50), np.ones(50)]
        assert roc(truth, np.r_[rng.random(50), 1 + rng.random(50)]).auc == 1.0


def test_04_nb_brute_force(criterion):
    """Every count vector is used as a query against every corpus of these shapes (counts 0..2,
    labels A/B): up to 6 docs for V = 1, up to 3 docs for V = 2, one doc per class for V in
    {3, 4}; plus seeded 6-document, 3-class corpora for V <= 4."""

    def oracle(X, labels, alpha):
        classes = sorted(set(labels))
        V = len(X[0])
        prior, like = [], []
        for c in classes:
            rows = [r for r, lab in zip(X, labels) if lab == c]
            total = sum(sum(r) for r in rows)
            prior.append(math.log(len(rows) / len(labels)))
            like.append([math.log((sum(r[t] for r in rows) + alpha) / (total + alpha * V)) for t in range(V)])
        return classes, np.array(prior), np.array(like)

    def check(X, labels, queries):
        model = train_nb(X, labels, 1.0)
        classes, prior, like = oracle(X, labels, 1.0)
        assert model.classes == classes
        expected = prior + queries @ like.T
        assert np.max(np.abs(model.scores(queries) - expected)) <= 1e-12

    with criterion(4, "Naive Bayes log-posteriors equal direct smoothed Bayes", 10):
        checked = 0
        for V, max_docs in ((1, 6), (2, 3)):
            vectors = [list(v) for v in itertools.product(range(3), repeat=V)]
            queries = np.array(vectors, dtype=float)
            for n_docs in range(1, max_docs + 1):
                for docs in itertools.product(vectors, repeat=n_docs):
                    for labels in itertools.product("AB", repeat=n_docs):
                        check(list(docs), list(labels), queries)
                        checked += 1
        for V in (3, 4):
            vectors = [list(v) for v in itertools.product(range(3), repeat=V)]
            queries = np.array(vectors, dtype=float)
            for a, b in itertools.product(vectors, repeat=2):
                check([a, b], ["A", "B"], queries)
                checked += 1
        rng = np.random.default_rng(4)
        for _ in range(500):
            V = int(rng.integers(1, 5))
            X = rng.integers(0, 3, (6, V)).tolist()
            labels = [str(c) for c in rng.choice(list("ABC"), 6)]
            check(X, labels, np.array(list(itertools.product(range(3), repeat=V)), dtype=float))
            checked += 1
        assert checked > 50000


def test_05_gradient_checks(criterion):
    def relative_error(analytic, numeric):
        worst = 0.0
        for k in analytic:
            a, n = analytic[k], numeric[k]
            worst = max(worst, float(np.max(np.abs(a - n) / np.maximum(np.abs(a) + np.abs(n), 1e-8))))
        return worst

    with criterion(5, "RNN and LSTM gradients match finite differences", 30):
        worst = 0.0
        for kind in ("rnn", "lstm"):
            for seed in range(20):
                rng = np.random.default_rng(seed)
                params = init_params(kind, 6, 3, 8, 4, rng, dtype=np.longdouble)
                for k in ("b", "bo"):
                    params[k] = params[k] + rng.normal(0, 0.1, params[k].shape).astype(np.longdouble)
                seqs = [rng.integers(0, 6, size=int(rng.integers(1, 7))).tolist() for _ in range(2)]
                ids, mask = pad_batch(seqs, 6)
                mask = mask.astype(np.longdouble)
                y = rng.integers(0, 3, 2)
                l2 = 0.01 if seed % 2 else 0.0
                _, grads = loss_and_grads(params, kind, ids, mask, y, l2)
                numeric = numerical_gradient(params, kind, ids, mask, y, l2, step=1e-5)
                worst = max(worst, relative_error(grads, numeric))
        assert worst < 1e-4, worst


def test_06_svm_separable(criterion):
    with criterion(6, "SVM separates blobs; batch objective non-increasing", 5):
        X, y = gaussian_blobs(200, separation=6.0, seed=6)
        model = train_svm(X, y, lam=1e-3, epochs=50, seed=6)
        assert np.mean(np.array(model.predict(X)) == np.array(y)) == 1.0
        batch = train_svm(X, y, lam=1e-2, epochs=50, mode="batch", step=0.5)
        h = np.asarray(batch.objective_history)
        assert np.all(np.diff(h, axis=0) <= 0)


def test_07_forest(criterion):
    with criterion(7, "forest fits threshold rule; identical seed gives identical bytes", 10):
        X, y = threshold_dataset(200, seed=7)
        cfg = ForestConfig(n_trees=100, seed=7)
        a, b = train_forest(X, y, cfg), train_forest(X, y, cfg)
        assert np.mean(np.array(a.predict(X)) == np.array(y)) == 1.0
        assert a.dumps().encode() == b.dumps().encode()


def test_08_lda_recovery(criterion):
    with criterion(8, "LDA recovers two planted topics; counts conserved every sweep", 30):
        docs, truth, vocabs = two_topic_corpus(n_docs=200, vocab_size=10, seed=8)
        vocab = build_vocabulary(docs)
        total = sum(len(d) for d in docs)
        lengths = np.array([len(d) for d in docs])
        ok = []

        def check(sweep, ndk, nkw, nk):
            ok.append(ndk.sum() == total and np.array_equal(ndk.sum(axis=1), lengths)
                      and np.array_equal(nkw.sum(axis=1), nk) and nk.sum() == total)

        model = fit_lda(docs, vocab, LdaConfig(K=2, iterations=500, seed=8), on_sweep=check)
        assert len(ok) == 500 and all(ok)
        sources = [set(v) for v in vocabs]
        used = set()
        for k in range(2):
            top = {t for t, _ in top_terms(model, k, 5)}
            owners = [i for i, s in enumerate(sources) if top <= s]
            assert len(owners) == 1
            used.add(owners[0])
        assert used == {0, 1}


def test_09_word2vec_planted_pair(criterion):
    with criterion(9, "planted word pair is closer than random pairs; bit-identical reruns", 60):
        sentences, filler = planted_pair_corpus(n_sentences=2000, seed=9)
        cfg = Word2VecConfig(mode="skipgram", dim=50, epochs=5, seed=9)
        model = train_word2vec(sentences, cfg)
        planted = cosine_similarity(model["gain"], model["profit"])
        rng = np.random.default_rng(9)
        random_pairs = [rng.choice(len(filler), 2, replace=False) for _ in range(100)]
        baseline = np.mean([cosine_similarity(model[filler[i]], model[filler[j]]) for i, j in random_pairs])
        assert planted - baseline >= 0.2, (planted, baseline)
        again = train_word2vec(sentences, cfg)
        assert np.array_equal(model.input_vectors, again.input_vectors)
        assert model.input_vectors.tobytes() == again.input_vectors.tobytes()


def test_10_end_to_end_comparison(criterion):
    with criterion(10, "all five models reach 0.85 accuracy on a held-out split", 300):
        corpus = risk_corpus(n_docs=1000, seed=10)
        comparison = run_comparison(corpus, ComparisonSettings(seed=10), dataset="risk_corpus(1000, seed=10)")
        table = comparison_table(comparison)
        print(table)
        assert list(comparison.results) == ["nb", "svm", "forest", "rnn", "lstm"]
        for kind, result in comparison.results.items():
            assert result.report.accuracy >= 0.85, (kind, result.report.accuracy)
        rows = table.split("\n\n")[0].splitlines()
        assert len(rows) == 6 and rows[0].split() == ["Model", "Accuracy", "Precision", "Recall", "F1", "Score"]


def test_11_finance_spot_values(criterion):
    def rec(company, assets, profit):
        return FinancialRecord(company, ReportType.ANNUAL, dt.date(2023, 3, 31), assets, profit, 1.5, 0.6)

    with criterion(11, "ratio, trend and screen spot values", 1):
        assert liquidity_ratio(150, 100) == 1.5
        assert debt_ratio(300, 500) == 0.6
        (t,) = trend_report([(rec("Company A", 500, 50), rec("Company A", 525, 55))])
        assert (format_percent(t.net_profit_yoy), format_percent(t.asset_growth)) == ("+10%", "+5%")
        records = load_financial_records(str(resources.files("riskminer") / "data" / "table1.csv"))
        reports = {r.company: r for r in screen(records)}
        for r in records:
            assert reports[r.company].flag("liquidity") == (r.liquidity_ratio <= 1.5)
            assert reports[r.company].flag("debt") == (r.debt_ratio >= 0.7)
        flagged = Counter(rule for rep in reports.values() for rule in rep.triggered)
        assert flagged == {"liquidity": 6, "debt": 3}


def test_12_cli_determinism(criterion, tmp_path):
    def outputs(directory):
        return {p.name: p.read_bytes() for p in sorted(directory.iterdir())}

    with criterion(12, "train, topics and embed are byte-identical across reruns", 600):
        base = tmp_path / "base"
        assert run(["ingest", "--generate", "400", "--seed", "12", "--out", str(base / "ingest")]) == 0
        assert run(["preprocess", "--in", str(base / "ingest" / "corpus.jsonl"), "--out", str(base / "prep")]) == 0
        tokens = str(base / "prep" / "tokens.tsv")
        assert run(["featurize", "--in", tokens, "--seed", "12", "--out", str(base / "feat")]) == 0
        jobs = [["train", "--in", str(base / "feat"), "--kind", kind] for kind in ("nb", "svm", "forest", "rnn", "lstm")]
        jobs.append(["train", "--in", str(base / "feat"), "--kind", "forest", "--jobs", "4"])
        jobs.append(["topics", "--in", tokens, "--k", "5", "--iterations", "200"])
        jobs += [["embed", "--in", tokens, "--mode", mode] for mode in ("skipgram", "cbow")]
        for i, job in enumerate(jobs):
            first, second = tmp_path / f"{i}a", tmp_path / f"{i}b"
            assert run(job + ["--seed", "12", "--out", str(first)]) == 0
            assert run(job + ["--seed", "12", "--out", str(second)]) == 0
            a, b = outputs(first), outputs(second)
            assert a and a == b, job
        # the threaded forest must equal the serial one, provenance aside
        serial = (tmp_path / "2a" / "model.txt").read_text().split("\n")
        threaded = (tmp_path / "5a" / "model.txt").read_text().split("\n")
        strip = [ln for ln in serial if not ln.startswith("#")]
        assert strip == [ln for ln in threaded if not ln.startswith("#")]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))

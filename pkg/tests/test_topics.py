from collections import Counter

import numpy as np
import pytest

from riskminer.errors import ConfigError, EmptyDocument, IndexOutOfRange, TopicOutOfRange
from riskminer.features import build_vocabulary, fit_idf
from riskminer.synthetic import two_topic_corpus
from riskminer.topics import LdaConfig, TopicModel, doc_topics, extract_keywords, fit_lda, top_terms


def match_topics(model, vocabs, n=5):
    """Greedy topic-to-truth matching by top-term overlap."""
    overlap = np.array([[sum(t in set(v) for t, _ in top_terms(model, k, n)) for v in vocabs]
                        for k in range(model.K)])
    pairs, used_k, used_v = {}, set(), set()
    for flat in np.argsort(-overlap, axis=None, kind="stable"):
        k, v = divmod(int(flat), len(vocabs))
        if k not in used_k and v not in used_v:
            pairs[k] = v
            used_k.add(k)
            used_v.add(v)
    return pairs


class TestConfig:
    def test_defaults(self):
        cfg = LdaConfig(K=4)
        assert cfg.alpha == 12.5 and cfg.beta == 0.01

    @pytest.mark.parametrize("kwargs", [{"K": 0}, {"alpha": 0.0}, {"beta": -1.0}, {"iterations": 0}])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            LdaConfig(**kwargs)


class TestFit:
    def test_single_topic(self):
        docs = [["risk", "risk", "loss"], ["risk", "market"]]
        vocab = build_vocabulary(docs)
        model = fit_lda(docs, vocab, LdaConfig(K=1, iterations=5))
        assert np.array_equal(model.theta, np.ones((2, 1)))
        counts = Counter(t for d in docs for t in d)
        expected = np.array([counts[t] + 0.01 for t in vocab.tokens]) / (5 + 0.01 * len(vocab))
        np.testing.assert_allclose(model.phi[0], expected, rtol=1e-12)
        assert top_terms(model, 0, 1)[0][0] == "risk"
        assert doc_topics(model, 1).tolist() == [1.0]

    def test_two_topic_recovery_and_conservation(self):
        docs, truth, vocabs = two_topic_corpus(n_docs=200, seed=0)
        vocab = build_vocabulary(docs)
        lengths = np.array([len(d) for d in docs])
        checks = []

        def check(sweep, ndk, nkw, nk):
            checks.append(np.array_equal(ndk.sum(axis=1), lengths)
                          and ndk.sum() == lengths.sum()
                          and np.array_equal(nkw.sum(axis=1), nk)
                          and nk.sum() == lengths.sum())

        model = fit_lda(docs, vocab, LdaConfig(K=2, iterations=500, seed=0), on_sweep=check)
        assert len(checks) == 500 and all(checks)
        pairs = match_topics(model, vocabs)
        for k, v in pairs.items():
            assert all(t in set(vocabs[v]) for t, _ in top_terms(model, k, 5))
        np.testing.assert_allclose(model.phi.sum(axis=1), 1.0, atol=1e-9)
        np.testing.assert_allclose(model.theta.sum(axis=1), 1.0, atol=1e-9)
        assert np.all(model.phi >= 0) and np.all(model.theta >= 0)

    def test_pure_document_mass(self):
        # a weaker document prior than the 50/K default, which alone puts
        # theta near 0.76 for a 30-60 token single-topic document
        docs, truth, vocabs = two_topic_corpus(n_docs=200, seed=0)
        vocab = build_vocabulary(docs)
        model = fit_lda(docs, vocab, LdaConfig(K=2, alpha=0.5, iterations=200, seed=0))
        pairs = match_topics(model, vocabs)
        topic_of = {v: k for k, v in pairs.items()}
        for d in range(len(docs)):
            assert doc_topics(model, d)[topic_of[truth[d]]] >= 0.8

    def test_deterministic(self):
        docs, _, _ = two_topic_corpus(n_docs=40, seed=3)
        vocab = build_vocabulary(docs)
        cfg = LdaConfig(K=3, iterations=30, seed=7)
        a, b = fit_lda(docs, vocab, cfg), fit_lda(docs, vocab, cfg)
        assert np.array_equal(a.phi, b.phi) and np.array_equal(a.theta, b.theta)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_conservation_any_seed(self, seed):
        docs, _, _ = two_topic_corpus(n_docs=30, seed=seed, mix=0.3)
        vocab = build_vocabulary(docs)
        total = sum(len(d) for d in docs)
        seen = []
        fit_lda(docs, vocab, LdaConfig(K=4, iterations=20, seed=seed),
                on_sweep=lambda s, ndk, nkw, nk: seen.append(ndk.sum() == total == nkw.sum()))
        assert all(seen)

    def test_empty_document(self):
        vocab = build_vocabulary([["a", "b"]])
        with pytest.raises(EmptyDocument) as err:
            fit_lda([["a"], ["zzz"]], vocab, LdaConfig(K=2, iterations=1), doc_ids=["d0", "d1"])
        assert err.value.doc_id == "d1"


class TestQueries:
    def model_with_tie(self):
        vocab = build_vocabulary([["apple", "banana", "cherry"]])
        phi = np.array([[0.25, 0.5, 0.25]])
        return TopicModel(phi, np.ones((1, 1)), vocab, LdaConfig(K=1))

    def test_tie_break_and_overlong_n(self):
        terms = top_terms(self.model_with_tie(), 0, 10)
        assert [t for t, _ in terms] == ["banana", "apple", "cherry"]

    def test_out_of_range(self):
        model = self.model_with_tie()
        with pytest.raises(TopicOutOfRange):
            top_terms(model, 1, 3)
        with pytest.raises(IndexOutOfRange):
            doc_topics(model, 5)

    def test_report_format(self):
        text = self.model_with_tie().format_report(2)
        assert text == "topic 0\nbanana 0.5\napple 0.25\n"


class TestKeywords:
    def test_rare_frequent_term_first(self):
        docs = [["liquidity", "liquidity", "risk", "market"], ["risk", "market"], ["risk", "credit"]]
        model = fit_idf(build_vocabulary(docs))
        ranked = extract_keywords(docs[0], model, 3)
        assert ranked[0][0] == "liquidity"
        assert ranked[0][1] == pytest.approx(2 * np.log(3 / 2))

    def test_empty(self):
        model = fit_idf(build_vocabulary([["a"], ["b"]]))
        assert extract_keywords([], model, 5) == []
        assert extract_keywords(["a"], model, 0) == []

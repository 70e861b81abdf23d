"""LDA topic discovery by collapsed Gibbs sampling, and TF-IDF keyword ranking."""

from dataclasses import dataclass

import numba
import numpy as np

from .errors import ConfigError, EmptyDocument, IndexOutOfRange, TopicOutOfRange
from .features.text import SparseVector, _tokens_of, tfidf


@dataclass(frozen=True)
class LdaConfig:
    K: int = 10
    alpha: float | None = None  # None -> 50 / K
    beta: float = 0.01
    iterations: int = 500
    seed: int = 0

    def __post_init__(self):
        if self.K < 1:
            raise ConfigError("K must be >= 1")
        if self.alpha is None:
            object.__setattr__(self, "alpha", 50.0 / self.K)
        if not self.alpha > 0 or not self.beta > 0:
            raise ConfigError("alpha and beta must be > 0")
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")


class TopicModel:
    def __init__(self, phi, theta, vocab, config, doc_ids=None, log_likelihood=None):
        self.phi = phi
        self.theta = theta
        self.vocab = vocab
        self.config = config
        self.doc_ids = list(doc_ids) if doc_ids is not None else [str(i) for i in range(len(theta))]
        self.log_likelihood = log_likelihood

    @property
    def K(self):
        return self.phi.shape[0]

    def format_report(self, n=10):
        blocks = []
        for k in range(self.K):
            lines = [f"topic {k}"]
            lines += [f"{tok} {p!r}" for tok, p in top_terms(self, k, n)]
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + "\n"


@numba.njit(cache=True)
def _sweep(words, docs, z, ndk, nkw, nk, alpha, beta, uniforms):
    n_topics = nkw.shape[0]
    vbeta = nkw.shape[1] * beta
    p = np.empty(n_topics)
    for i in range(words.shape[0]):
        w, d, k = words[i], docs[i], z[i]
        ndk[d, k] -= 1
        nkw[k, w] -= 1
        nk[k] -= 1
        total = 0.0
        for t in range(n_topics):
            total += (ndk[d, t] + alpha) * (nkw[t, w] + beta) / (nk[t] + vbeta)
            p[t] = total
        u = uniforms[i] * total
        k = 0
        while k < n_topics - 1 and p[k] <= u:
            k += 1
        z[i] = k
        ndk[d, k] += 1
        nkw[k, w] += 1
        nk[k] += 1


def _token_ids(docs, vocab, doc_ids):
    out = []
    for d, doc in enumerate(docs):
        if isinstance(doc, SparseVector):
            ids = np.repeat(doc.indices, doc.values.astype(np.int64))
        else:
            ids = np.asarray(vocab.ids(_tokens_of(doc)), dtype=np.int64)
        if len(ids) == 0:
            raise EmptyDocument(doc_ids[d])
        out.append(ids)
    return out


def fit_lda(docs, vocab, config=LdaConfig(), doc_ids=None, on_sweep=None):
    """Fit LDA to tokenized documents (or BoW ``SparseVector`` counts).

    ``on_sweep(sweep, ndk, nkw, nk)`` is called after each full sweep with
    the live count arrays; it must not modify them.  Point estimates come
    from the final sample only.
    """
    doc_ids = list(doc_ids) if doc_ids is not None else [str(i) for i in range(len(docs))]
    per_doc = _token_ids(docs, vocab, doc_ids)
    n_docs, size, n_topics = len(per_doc), len(vocab), config.K
    words = np.concatenate(per_doc)
    doc_of = np.concatenate([np.full(len(ids), d, dtype=np.int64) for d, ids in enumerate(per_doc)])

    rng = np.random.default_rng(config.seed)
    z = rng.integers(0, n_topics, size=len(words)).astype(np.int64)
    ndk = np.zeros((n_docs, n_topics), dtype=np.int64)
    nkw = np.zeros((n_topics, size), dtype=np.int64)
    np.add.at(ndk, (doc_of, z), 1)
    np.add.at(nkw, (z, words), 1)
    nk = nkw.sum(axis=1)

    for sweep in range(config.iterations):
        _sweep(words, doc_of, z, ndk, nkw, nk, float(config.alpha), float(config.beta),
               rng.random(len(words)))
        if on_sweep is not None:
            on_sweep(sweep, ndk, nkw, nk)

    phi = (nkw + config.beta) / (nk[:, None] + size * config.beta)
    theta = (ndk + config.alpha) / (ndk.sum(axis=1)[:, None] + n_topics * config.alpha)
    loglik = float(np.sum(np.log(phi[z, words])))
    return TopicModel(phi, theta, vocab, config, doc_ids, loglik)


def top_terms(model, k, n=10):
    """``n`` most probable tokens of topic ``k``; equal probabilities rank lexicographically."""
    if not 0 <= k < model.K:
        raise TopicOutOfRange(f"topic {k} outside 0..{model.K - 1}")
    # vocabulary indices are in lexicographic order, so a stable sort breaks ties correctly
    order = np.argsort(-model.phi[k], kind="stable")[:max(n, 0)]
    return [(model.vocab.tokens[i], float(model.phi[k, i])) for i in order]


def doc_topics(model, d):
    if not 0 <= d < len(model.theta):
        raise IndexOutOfRange(f"document index {d} outside 0..{len(model.theta) - 1}")
    return model.theta[d].copy()


def extract_keywords(tokens, model, n=10):
    """Distinct in-vocabulary tokens ranked by TF-IDF weight, ties lexicographic."""
    if n <= 0:
        return []
    vec = tfidf(tokens, model)
    ranked = sorted(((model.vocab.tokens[i], float(v)) for i, v in vec.entries),
                    key=lambda tv: (-tv[1], tv[0]))
    return ranked[:n]

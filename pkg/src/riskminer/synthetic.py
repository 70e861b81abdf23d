"""Seeded generators for synthetic corpora and datasets with known structure.

Each generator is its own ground truth: the planted structure is what the
corresponding learner is expected to recover.
"""

import numpy as np

from .corpus import Corpus, Document

RISK_KEYWORDS = {
    "market_risk": [
        "market", "volatility", "price", "equity", "index", "decline", "fluctuation",
        "exchange", "commodity", "downturn", "rally", "sentiment",
    ],
    "credit_risk": [
        "credit", "default", "borrower", "loan", "delinquency", "collateral",
        "rating", "downgrade", "counterparty", "writeoff", "arrears", "exposure",
    ],
    "liquidity_risk": [
        "liquidity", "cash", "funding", "withdrawal", "shortfall", "refinancing",
        "maturity", "deposit", "outflow", "buffer", "solvency", "payable",
    ],
    "operational_risk": [
        "operational", "fraud", "outage", "system", "error", "breach", "staff",
        "process", "control", "disruption", "cyber", "compliance",
    ],
    "policy_risk": [
        "policy", "regulation", "tariff", "government", "tax", "sanction",
        "legislation", "reform", "regulator", "subsidy", "election", "ban",
    ],
}

BACKGROUND_WORDS = [
    "company", "report", "quarter", "annual", "revenue", "management", "board",
    "shareholder", "statement", "outlook", "segment", "growth", "profit", "asset",
    "liability", "capital", "investment", "strategy", "operation", "performance",
    "earnings", "dividend", "expense", "margin", "forecast", "guidance", "customer",
    "product", "service", "business", "region", "period", "result", "target",
    "review", "analysis", "committee", "audit", "budget", "plan",
]

FILLER_WORDS = ["the", "and", "in", "of", "to", "a", "for", "on", "with", "is", "was", "by"]


def risk_corpus(n_docs=1000, seed=0, keyword_rate=0.25, confusion_rate=0.05,
                length=(20, 40), markup_rate=0.1):
    """Labeled multiclass risk corpus with per-class keyword distributions.

    Each token is a class keyword with probability ``keyword_rate``, a
    keyword of some other class with ``confusion_rate``, else a background
    word; stopword fillers and occasional markup are mixed in so the text
    exercises the whole preprocessing pipeline.  Labels cycle through the
    classes, so class sizes differ by at most one.
    """
    rng = np.random.default_rng(seed)
    labels = sorted(RISK_KEYWORDS)
    docs = []
    for i in range(n_docs):
        label = labels[i % len(labels)]
        own = RISK_KEYWORDS[label]
        others = [w for lab in labels if lab != label for w in RISK_KEYWORDS[lab]]
        # Zipf-like weights inside each class: a few keywords dominate
        weights = 1.0 / np.arange(1, len(own) + 1)
        weights /= weights.sum()
        words = []
        for _ in range(int(rng.integers(length[0], length[1] + 1))):
            u = rng.random()
            if u < keyword_rate:
                words.append(own[rng.choice(len(own), p=weights)])
            elif u < keyword_rate + confusion_rate:
                words.append(others[rng.integers(len(others))])
            else:
                words.append(BACKGROUND_WORDS[rng.integers(len(BACKGROUND_WORDS))])
            if rng.random() < 0.3:
                words.append(FILLER_WORDS[rng.integers(len(FILLER_WORDS))])
        text = " ".join(words).capitalize() + "."
        if rng.random() < markup_rate:
            text = f"<p>{text}</p>"
        docs.append(Document(id=f"R{i:05d}", text=text, label=label))
    order = rng.permutation(n_docs)
    return Corpus([docs[k] for k in order])


def two_topic_corpus(n_docs=200, vocab_size=10, doc_length=(30, 60), seed=0, mix=None):
    """Documents drawn from two disjoint word lists ``a0..a9`` and ``b0..b9``.

    Returns ``(docs, truth)`` where ``truth[d]`` is the generating topic of
    document ``d`` (0 or 1).  With ``mix`` set, each token independently
    comes from the other topic with that probability.
    """
    rng = np.random.default_rng(seed)
    vocabs = ([f"a{i}" for i in range(vocab_size)], [f"b{i}" for i in range(vocab_size)])
    docs, truth = [], []
    for d in range(n_docs):
        k = d % 2
        n = int(rng.integers(doc_length[0], doc_length[1] + 1))
        toks = []
        for _ in range(n):
            src = k if mix is None or rng.random() >= mix else 1 - k
            toks.append(vocabs[src][rng.integers(vocab_size)])
        docs.append(toks)
        truth.append(k)
    return docs, np.array(truth), vocabs


def planted_pair_corpus(n_sentences=2000, pair=("gain", "profit"), n_themes=20,
                        theme_size=10, seed=0):
    """Theme-structured sentences; the planted pair co-occurs, adjacent, in theme 0.

    Sentences draw 80% of their words from one theme and the rest from the
    whole filler vocabulary, so unrelated words sit in different regions of
    the embedding space while the planted pair shares all of its contexts.
    """
    rng = np.random.default_rng(seed)
    themes = [[f"t{k:02d}w{i}" for i in range(theme_size)] for k in range(n_themes)]
    filler = [w for t in themes for w in t]
    sentences = []
    for _ in range(n_sentences):
        k = int(rng.integers(n_themes))
        n = int(rng.integers(8, 13))
        toks = [themes[k][rng.integers(theme_size)] if rng.random() < 0.8
                else filler[rng.integers(len(filler))] for _ in range(n)]
        if k == 0:
            p = int(rng.integers(0, n - 1))
            planted = list(pair) if rng.random() < 0.5 else list(pair[::-1])
            toks[p:p] = planted
        sentences.append(toks)
    return sentences, filler


def gaussian_blobs(n=200, separation=6.0, sigma=1.0, seed=0, labels=("neg", "pos")):
    """Two 2-D Gaussian blobs whose centers are ``separation * sigma`` apart."""
    rng = np.random.default_rng(seed)
    half = separation * sigma / 2.0
    centers = np.array([[-half / np.sqrt(2), -half / np.sqrt(2)],
                        [half / np.sqrt(2), half / np.sqrt(2)]])
    y = np.arange(n) % 2
    x = centers[y] + sigma * rng.standard_normal((n, 2))
    return x, [labels[k] for k in y]


def threshold_dataset(n=200, seed=0):
    """One feature, label ``x > 0``; no noise."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1.0, 1.0, size=(n, 1))
    return x, ["pos" if v > 0 else "neg" for v in x[:, 0]]


def parity_sequences(n=400, length=8, vocab_size=16, seed=0):
    """Token-id sequences labeled by the parity of their first token."""
    rng = np.random.default_rng(seed)
    seqs = rng.integers(0, vocab_size, size=(n, length))
    return [list(map(int, s)) for s in seqs], ["odd" if s[0] % 2 else "even" for s in seqs]

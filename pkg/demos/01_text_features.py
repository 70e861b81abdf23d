"""
From raw report text to feature vectors
=======================================

Cleaning, tokenizing and stemming a few risk notes, then turning them
into bag-of-words counts, TF-IDF weights and word2vec document vectors.
"""

import numpy as np

from riskminer.features import (
    Word2VecConfig,
    bow,
    build_vocabulary,
    cosine_similarity,
    doc_embedding,
    fit_idf,
    tfidf,
    train_word2vec,
)
from riskminer.preprocess import tokenize
from riskminer.synthetic import planted_pair_corpus

notes = [
    "Rising <b>market risk</b>, attention needed on liquidity",
    "Increased credit risk, suggest strengthening credit management",
    "Tight cash flow, recommend optimizing capital structure",
]

# markup is stripped, stopwords dropped and words reduced to their stems
docs = [tokenize(text) for text in notes]
for d in docs:
    print(d)

# the vocabulary is sorted, so feature columns are stable across runs
vocab = build_vocabulary(docs)
print(len(vocab), "terms:", vocab.tokens)

# raw counts, then counts scaled by ln(N / (1 + df)); a term in every
# document gets a negative weight, a term in N - 1 documents gets zero
model = fit_idf(vocab)
print("bow  ", bow(docs[1], vocab).entries)
print("tfidf", [(vocab.tokens[i], round(v, 4)) for i, v in tfidf(docs[1], model).entries])

# word2vec on a themed corpus where "gain" and "profit" always appear together
sentences, filler = planted_pair_corpus(n_sentences=2000, seed=0)
w2v = train_word2vec(sentences, Word2VecConfig(dim=50, epochs=5, seed=0))
print("cos(gain, profit) =", round(cosine_similarity(w2v["gain"], w2v["profit"]), 3))
rng = np.random.default_rng(0)
pairs = [rng.choice(len(filler), 2, replace=False) for _ in range(100)]
print("mean cos of random pairs =",
      round(np.mean([cosine_similarity(w2v[filler[i]], w2v[filler[j]]) for i, j in pairs]), 3))

# a document vector is the mean of its in-vocabulary word vectors
print(doc_embedding(["gain", "profit", "unknown"], w2v)[:5])

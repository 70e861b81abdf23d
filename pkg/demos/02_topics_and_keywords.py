"""
Risk themes with LDA and TF-IDF keywords
========================================

A collapsed Gibbs sampler recovers two planted topics, and TF-IDF picks
out the most distinctive terms of a single document.
"""

from riskminer.features import build_vocabulary, fit_idf
from riskminer.synthetic import two_topic_corpus
from riskminer.topics import LdaConfig, doc_topics, extract_keywords, fit_lda

# 200 documents, each drawn from one of two disjoint 10-word lists
docs, truth, vocabs = two_topic_corpus(n_docs=200, seed=0)
vocab = build_vocabulary(docs)

# watch the count tables stay consistent while sampling
total = sum(len(d) for d in docs)


def check(sweep, ndk, nkw, nk):
    assert ndk.sum() == nkw.sum() == nk.sum() == total


model = fit_lda(docs, vocab, LdaConfig(K=2, alpha=0.5, iterations=300, seed=0), on_sweep=check)
print(model.format_report(5))

# document 0 came from list `truth[0]`; its topic mixture should be lopsided
print("truth:", truth[0], "theta:", doc_topics(model, 0).round(3))

# keywords: the terms of one document with the largest TF-IDF weight
idf = fit_idf(vocab)
for term, weight in extract_keywords(docs[0], idf, 5):
    print(f"{term:6s} {weight:.3f}")

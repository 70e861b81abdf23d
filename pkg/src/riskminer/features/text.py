"""Vocabulary, bag-of-words and TF-IDF.

TF is the raw occurrence count and IDF is ``ln(N / (1 + df))`` exactly as
written, with no flooring.  A term present in every document therefore
gets a negative weight (``ln(N / (N + 1))``), and so does every term of a
one-document corpus.  Callers that need non-negative features should
shift or clip downstream.
"""

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .._io import fmt_float, header_line, lines_of, parse_header
from ..errors import EmptyVocabulary, MalformedRecord

TFIDF_FORMAT = "riskminer-tfidf"
TFIDF_SCHEMA = 1


def _tokens_of(doc):
    return doc.tokens if hasattr(doc, "tokens") else doc


@dataclass(frozen=True)
class SparseVector:
    """Sorted (index, value) pairs with no stored zeros."""

    indices: np.ndarray
    values: np.ndarray

    @classmethod
    def from_pairs(cls, pairs):
        pairs = sorted((int(i), float(v)) for i, v in pairs if v != 0)
        idx = np.array([i for i, _ in pairs], dtype=np.int64)
        val = np.array([v for _, v in pairs], dtype=np.float64)
        return cls(idx, val)

    @property
    def entries(self):
        return [(int(i), float(v)) for i, v in zip(self.indices, self.values)]

    def __len__(self):
        return len(self.indices)

    def to_dense(self, size):
        out = np.zeros(size)
        out[self.indices] = self.values
        return out


class Vocabulary:
    """Token index with document frequencies; indices follow sorted token order."""

    def __init__(self, tokens, df, n_docs):
        self.tokens = tuple(tokens)
        self.df = np.asarray(df, dtype=np.int64)
        self.n_docs = int(n_docs)
        self.index = {t: i for i, t in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise ValueError("vocabulary tokens must be unique")

    def __len__(self):
        return len(self.tokens)

    def __contains__(self, token):
        return token in self.index

    def __eq__(self, other):
        return (isinstance(other, Vocabulary) and self.tokens == other.tokens
                and self.n_docs == other.n_docs and np.array_equal(self.df, other.df))

    def df_of(self, token):
        return int(self.df[self.index[token]])

    def ids(self, tokens):
        """Indices of in-vocabulary tokens, order kept, unknown tokens dropped."""
        index = self.index
        return [index[t] for t in tokens if t in index]


def build_vocabulary(docs, min_df=1, max_df_ratio=1.0):
    """Count document frequencies and keep tokens with min_df <= df <= max_df_ratio * N."""
    docs = [_tokens_of(d) for d in docs]
    n = len(docs)
    if n == 0:
        raise EmptyVocabulary("cannot build a vocabulary from zero documents")
    df = Counter()
    for toks in docs:
        df.update(set(toks))
    kept = sorted(t for t, c in df.items() if c >= min_df and c / n <= max_df_ratio)
    if not kept:
        raise EmptyVocabulary(
            f"no token satisfies min_df={min_df}, max_df_ratio={max_df_ratio}")
    return Vocabulary(kept, [df[t] for t in kept], n)


def bow(tokens, vocab):
    counts = Counter(vocab.ids(_tokens_of(tokens)))
    return SparseVector.from_pairs(counts.items())


class TfidfModel:
    def __init__(self, vocab, idf):
        self.vocab = vocab
        self.idf = np.asarray(idf, dtype=np.float64)
        if len(self.idf) != len(vocab):
            raise ValueError("idf length must equal vocabulary size")

    def __len__(self):
        return len(self.vocab)

    def dumps(self):
        v = self.vocab
        lines = [header_line(TFIDF_FORMAT, TFIDF_SCHEMA, V=len(v), N=v.n_docs)]
        for i, tok in enumerate(v.tokens):
            lines.append(f"{tok}\t{i}\t{v.df[i]}\t{fmt_float(self.idf[i])}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text):
        lines = lines_of(text)
        if not lines:
            raise MalformedRecord(1, "empty TF-IDF model file")
        head = parse_header(lines[0], TFIDF_FORMAT, TFIDF_SCHEMA)
        size, n_docs = int(head["V"]), int(head["N"])
        tokens, df, idf = [], [], []
        for lineno, line in enumerate(lines[1:], start=2):
            parts = line.split("\t")
            if len(parts) != 4 or int(parts[1]) != len(tokens):
                raise MalformedRecord(lineno, "expected token, index, df, idf")
            tokens.append(parts[0])
            df.append(int(parts[2]))
            idf.append(float(parts[3]))
        if len(tokens) != size:
            raise MalformedRecord(len(lines), f"header says V={size}, found {len(tokens)}")
        return cls(Vocabulary(tokens, df, n_docs), idf)


def fit_idf(vocab):
    """IDF weights ``ln(N / (1 + df))`` for every vocabulary entry."""
    return TfidfModel(vocab, np.log(vocab.n_docs / (1.0 + vocab.df)))


def tfidf(tokens, model):
    counts = bow(tokens, model.vocab)
    values = counts.values * model.idf[counts.indices]
    keep = values != 0
    return SparseVector(counts.indices[keep], values[keep])


def bow_matrix(docs, vocab):
    """Dense document-term count matrix (rows follow ``docs``)."""
    out = np.zeros((len(docs), len(vocab)))
    for r, d in enumerate(docs):
        for i in vocab.ids(_tokens_of(d)):
            out[r, i] += 1
    return out


def tfidf_matrix(docs, model):
    return bow_matrix(docs, model.vocab) * model.idf

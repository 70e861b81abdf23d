"""Word2Vec with negative sampling, document pooling and feature fusion.

Training is single-threaded so two runs with the same corpus, config and
seed give bit-identical matrices.  All randomness (initialization,
negative draws) comes from one ``numpy.random.Generator``; the compiled
inner loops only consume pre-drawn samples.
"""

from collections import Counter
from dataclasses import dataclass

import numba
import numpy as np

from .._io import fmt_floats, header_line, lines_of, parse_header
from ..errors import ConfigError, CorpusTooSmall, DimensionMismatch, MalformedRecord, ZeroVector
from .text import SparseVector, Vocabulary, _tokens_of

EMBEDDING_FORMAT = "riskminer-embedding"
EMBEDDING_SCHEMA = 1
NOISE_POWER = 0.75
FINAL_LR_FRACTION = 0.1


@dataclass(frozen=True)
class Word2VecConfig:
    mode: str = "skipgram"
    dim: int = 50
    window: int = 2
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_count: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("skipgram", "cbow"):
            raise ConfigError(f"mode must be skipgram or cbow, got {self.mode!r}")
        for name in ("dim", "window", "negatives", "epochs", "min_count"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if not self.learning_rate > 0:
            raise ConfigError("learning_rate must be > 0")


class EmbeddingModel:
    def __init__(self, vocab, input_vectors, output_vectors, counts=None, losses=(), mode="skipgram"):
        self.vocab = vocab
        self.input_vectors = np.asarray(input_vectors, dtype=np.float64)
        self.output_vectors = np.asarray(output_vectors, dtype=np.float64)
        self.counts = np.asarray(counts if counts is not None else np.zeros(len(vocab)), dtype=np.int64)
        self.losses = list(losses)
        self.mode = mode
        if self.input_vectors.shape != (len(vocab), self.input_vectors.shape[1]):
            raise DimensionMismatch("input_vectors must have one row per vocabulary token")

    @property
    def dim(self):
        return self.input_vectors.shape[1]

    def __getitem__(self, token):
        return self.input_vectors[self.vocab.index[token]]

    def dumps(self):
        lines = [header_line(EMBEDDING_FORMAT, EMBEDDING_SCHEMA, V=len(self.vocab),
                             dim=self.dim, mode=self.mode)]
        for i, tok in enumerate(self.vocab.tokens):
            lines.append(f"{tok}\t{i}\t{self.counts[i]}\t{fmt_floats(self.input_vectors[i])}"
                         f"\t{fmt_floats(self.output_vectors[i])}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text):
        lines = lines_of(text)
        if not lines:
            raise MalformedRecord(1, "empty embedding file")
        head = parse_header(lines[0], EMBEDDING_FORMAT, EMBEDDING_SCHEMA)
        size, dim = int(head["V"]), int(head["dim"])
        tokens, counts, w_in, w_out = [], [], [], []
        for lineno, line in enumerate(lines[1:], start=2):
            parts = line.split("\t")
            if len(parts) != 5 or int(parts[1]) != len(tokens):
                raise MalformedRecord(lineno, "expected token, index, count, input, output")
            vin = [float(x) for x in parts[3].split()]
            vout = [float(x) for x in parts[4].split()]
            if len(vin) != dim or len(vout) != dim:
                raise MalformedRecord(lineno, f"vectors must have {dim} components")
            tokens.append(parts[0])
            counts.append(int(parts[2]))
            w_in.append(vin)
            w_out.append(vout)
        if len(tokens) != size:
            raise MalformedRecord(len(lines), f"header says V={size}, found {len(tokens)}")
        vocab = Vocabulary(tokens, [1] * size, max(1, size))
        return cls(vocab, np.array(w_in).reshape(size, dim), np.array(w_out).reshape(size, dim),
                   counts, mode=head.get("mode", "skipgram"))


@numba.njit(cache=True)
def _log_sigmoid(x):
    if x >= 0:
        return -np.log1p(np.exp(-x))
    return x - np.log1p(np.exp(x))


@numba.njit(cache=True)
def _sigmoid(x):
    if x >= 0:
        return 1.0 / (1.0 + np.exp(-x))
    e = np.exp(x)
    return e / (1.0 + e)


@numba.njit(cache=True)
def _train_unit(h, target, negs, w_out, lr, grad_h):
    """One positive + negatives against hidden vector ``h``; fills ``grad_h``."""
    dim = h.shape[0]
    for j in range(dim):
        grad_h[j] = 0.0
    loss = 0.0
    for s in range(negs.shape[0] + 1):
        if s == 0:
            word = target
            label = 1.0
        else:
            word = negs[s - 1]
            if word == target:
                continue
            label = 0.0
        dot = 0.0
        for j in range(dim):
            dot += h[j] * w_out[word, j]
        if label == 1.0:
            loss -= _log_sigmoid(dot)
        else:
            loss -= _log_sigmoid(-dot)
        g = lr * (label - _sigmoid(dot))
        for j in range(dim):
            grad_h[j] += g * w_out[word, j]
            w_out[word, j] += g * h[j]
    return loss


@numba.njit(cache=True)
def _skipgram_epoch(centers, contexts, negs, w_in, w_out, lr0, lr_min, done, total):
    dim = w_in.shape[1]
    grad_h = np.zeros(dim)
    loss = 0.0
    for p in range(centers.shape[0]):
        lr = lr0 - (lr0 - lr_min) * (done + p) / total
        c = centers[p]
        loss += _train_unit(w_in[c], contexts[p], negs[p], w_out, lr, grad_h)
        for j in range(dim):
            w_in[c, j] += grad_h[j]
    return loss


@numba.njit(cache=True)
def _cbow_epoch(targets, ctx_ptr, ctx_idx, negs, w_in, w_out, lr0, lr_min, done, total):
    dim = w_in.shape[1]
    grad_h = np.zeros(dim)
    h = np.zeros(dim)
    loss = 0.0
    for p in range(targets.shape[0]):
        lo, hi = ctx_ptr[p], ctx_ptr[p + 1]
        lr = lr0 - (lr0 - lr_min) * (done + p) / total
        for j in range(dim):
            h[j] = 0.0
        for q in range(lo, hi):
            for j in range(dim):
                h[j] += w_in[ctx_idx[q], j]
        n = hi - lo
        for j in range(dim):
            h[j] /= n
        loss += _train_unit(h, targets[p], negs[p], w_out, lr, grad_h)
        # word2vec convention: every context word receives the full hidden gradient
        for q in range(lo, hi):
            for j in range(dim):
                w_in[ctx_idx[q], j] += grad_h[j]
    return loss


def _flatten(sentences):
    ids = np.concatenate([np.asarray(s, dtype=np.int64) for s in sentences])
    sid = np.concatenate([np.full(len(s), k, dtype=np.int64) for k, s in enumerate(sentences)])
    return ids, sid


def _skipgram_pairs(ids, sid, window):
    """(center, context) index pairs ordered by center position then offset."""
    n = len(ids)
    pos, off = [], []
    for o in range(-window, window + 1):
        if o == 0:
            continue
        p = np.arange(max(0, -o), min(n, n - o))
        p = p[sid[p] == sid[p + o]]
        pos.append(p)
        off.append(np.full(len(p), o))
    pos, off = np.concatenate(pos), np.concatenate(off)
    order = np.lexsort((off, pos))
    pos, off = pos[order], off[order]
    return ids[pos], ids[pos + off]


def _cbow_units(ids, sid, window):
    targets, ptr, ctx = [], [0], []
    n = len(ids)
    for p in range(n):
        c = [ids[q] for q in range(max(0, p - window), min(n, p + window + 1))
             if q != p and sid[q] == sid[p]]
        if c:
            targets.append(ids[p])
            ctx.extend(c)
            ptr.append(len(ctx))
    return (np.array(targets, dtype=np.int64), np.array(ptr, dtype=np.int64),
            np.array(ctx, dtype=np.int64))


def train_word2vec(docs, config=Word2VecConfig()):
    """Train embeddings on tokenized documents (each document is one sentence)."""
    docs = [list(_tokens_of(d)) for d in docs]
    counts = Counter(t for d in docs for t in d)
    kept = sorted(t for t, c in counts.items() if c >= config.min_count)
    n_tokens = sum(counts[t] for t in kept)
    if not kept or n_tokens < config.window + 1:
        raise CorpusTooSmall(
            f"need at least window+1={config.window + 1} in-vocabulary tokens, have {n_tokens}")
    df = Counter(t for d in docs for t in set(d) if counts[t] >= config.min_count)
    vocab = Vocabulary(kept, [df[t] for t in kept], len(docs))
    freq = np.array([counts[t] for t in kept], dtype=np.int64)
    sentences = [vocab.ids(d) for d in docs]
    sentences = [s for s in sentences if len(s) > 1]
    if not sentences:
        raise CorpusTooSmall("no document has two in-vocabulary tokens")
    ids, sid = _flatten(sentences)

    rng = np.random.default_rng(config.seed)
    size, dim = len(vocab), config.dim
    w_in = (rng.random((size, dim)) - 0.5) / dim
    w_out = np.zeros((size, dim))
    noise = freq.astype(np.float64) ** NOISE_POWER
    noise /= noise.sum()
    cum_noise = np.cumsum(noise)
    cum_noise[-1] = 1.0

    if config.mode == "skipgram":
        centers, contexts = _skipgram_pairs(ids, sid, config.window)
        n_units = len(centers)
    else:
        targets, ctx_ptr, ctx_idx = _cbow_units(ids, sid, config.window)
        n_units = len(targets)
    if n_units == 0:
        raise CorpusTooSmall("no training pairs inside the window")

    lr0 = config.learning_rate
    lr_min = lr0 * FINAL_LR_FRACTION
    total = float(n_units * config.epochs)
    losses = []
    for epoch in range(config.epochs):
        draws = rng.random((n_units, config.negatives))
        negs = np.searchsorted(cum_noise, draws, side="right").astype(np.int64)
        np.minimum(negs, size - 1, out=negs)
        done = float(epoch * n_units)
        if config.mode == "skipgram":
            loss = _skipgram_epoch(centers, contexts, negs, w_in, w_out, lr0, lr_min, done, total)
        else:
            loss = _cbow_epoch(targets, ctx_ptr, ctx_idx, negs, w_in, w_out, lr0, lr_min, done, total)
        losses.append(loss / n_units)
    return EmbeddingModel(vocab, w_in, w_out, freq, losses, mode=config.mode)


def doc_embedding(tokens, model):
    """Mean input vector of in-vocabulary tokens; zeros when there are none."""
    ids = model.vocab.ids(_tokens_of(tokens))
    if not ids:
        return np.zeros(model.dim)
    return model.input_vectors[ids].mean(axis=0)


def fuse_features(tfidf_vec, emb_vec, vocab_size, dim=None):
    """Dense TF-IDF block of length ``vocab_size`` followed by the embedding block."""
    emb_vec = np.asarray(emb_vec, dtype=np.float64)
    if dim is not None and emb_vec.shape != (dim,):
        raise DimensionMismatch(f"embedding has shape {emb_vec.shape}, expected ({dim},)")
    if isinstance(tfidf_vec, SparseVector):
        if len(tfidf_vec) and tfidf_vec.indices[-1] >= vocab_size:
            raise DimensionMismatch(
                f"sparse index {tfidf_vec.indices[-1]} outside vocabulary of size {vocab_size}")
        dense = tfidf_vec.to_dense(vocab_size)
    else:
        dense = np.asarray(tfidf_vec, dtype=np.float64)
        if dense.shape != (vocab_size,):
            raise DimensionMismatch(f"TF-IDF vector has length {dense.size}, expected {vocab_size}")
    return np.concatenate([dense, emb_vec])


def cosine_similarity(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ZeroVector("cosine similarity is undefined for a zero vector")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))

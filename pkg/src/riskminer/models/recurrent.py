"""Elman RNN and LSTM sequence classifiers trained by backpropagation through time.

Sequences are token-id lists.  A batch is right-padded and masked: past a
sequence's end the hidden (and cell) state is carried unchanged, so the
state after the last step equals the state after the last real token.
The final hidden state goes through an affine layer and a softmax.

LSTM gate blocks are laid out ``[input, forget, output, candidate]``
along the last axis of ``Wx``, ``Wh`` and ``b``.

The same forward/backward code runs in any float dtype; passing
``dtype=np.longdouble`` gives the extended-precision mode used for
finite-difference gradient checks.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, EmptySequence, LengthMismatch
from . import serialize
from .base import Classifier, class_index
from .nn import OptimizerConfig, optimizer_step, sigmoid, softmax

PARAM_ORDER = ("embed", "Wx", "Wh", "b", "Wo", "bo")
L2_PARAMS = ("Wx", "Wh", "Wo")
PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class RecurrentConfig:
    hidden: int = 32
    dim: int = 32
    t_max: int = 200
    epochs: int = 10
    batch_size: int = 32
    optimizer: OptimizerConfig = field(default_factory=lambda: OptimizerConfig("adam", 0.01))
    clip_norm: float = 5.0
    l2: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in ("hidden", "dim", "t_max", "epochs", "batch_size"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if not self.clip_norm > 0 or self.l2 < 0:
            raise ConfigError("clip_norm must be > 0 and l2 >= 0")


def init_params(kind, vocab_size, n_classes, hidden, dim, rng, dtype=np.float64):
    gates = 4 * hidden if kind == "lstm" else hidden
    p = {
        "embed": rng.normal(0.0, 0.1, (vocab_size, dim)),
        "Wx": rng.uniform(-1, 1, (dim, gates)) / np.sqrt(dim),
        "Wh": rng.uniform(-1, 1, (hidden, gates)) / np.sqrt(hidden),
        "b": np.zeros(gates),
        "Wo": rng.uniform(-1, 1, (hidden, n_classes)) / np.sqrt(hidden),
        "bo": np.zeros(n_classes),
    }
    if kind == "lstm":
        p["b"][hidden:2 * hidden] = 1.0  # forget-gate bias starts open
    return {k: v.astype(dtype) for k, v in p.items()}


def pad_batch(seqs, t_max):
    """(ids, mask) arrays of shape (B, T); sequences truncated to ``t_max``."""
    seqs = [list(s)[:t_max] for s in seqs]
    width = max(1, max((len(s) for s in seqs), default=1))
    ids = np.zeros((len(seqs), width), dtype=np.int64)
    mask = np.zeros((len(seqs), width))
    for r, s in enumerate(seqs):
        ids[r, :len(s)] = s
        mask[r, :len(s)] = 1.0
    return ids, mask


def forward(params, kind, ids, mask):
    """Class probabilities plus the per-step cache needed by ``backward``."""
    dtype = params["Wx"].dtype
    mask = mask.astype(dtype)
    n, steps = ids.shape
    hidden = params["Wh"].shape[0]
    h = np.zeros((n, hidden), dtype=dtype)
    c = np.zeros((n, hidden), dtype=dtype)
    cache = []
    for t in range(steps):
        x = params["embed"][ids[:, t]]
        m = mask[:, t:t + 1]
        z = x @ params["Wx"] + h @ params["Wh"] + params["b"]
        if kind == "rnn":
            hn = np.tanh(z)
            cache.append((x, h, m, hn))
            h = m * hn + (1 - m) * h
        else:
            i = sigmoid(z[:, :hidden])
            f = sigmoid(z[:, hidden:2 * hidden])
            o = sigmoid(z[:, 2 * hidden:3 * hidden])
            g = np.tanh(z[:, 3 * hidden:])
            cn = f * c + i * g
            tc = np.tanh(cn)
            hn = o * tc
            cache.append((x, h, c, m, i, f, o, g, tc))
            c = m * cn + (1 - m) * c
            h = m * hn + (1 - m) * h
    probs = softmax(h @ params["Wo"] + params["bo"])
    return probs, (cache, h)


def loss_value(params, probs, y, l2):
    picked = np.maximum(probs[np.arange(len(y)), y], PROB_FLOOR)
    data = -np.mean(np.log(picked))
    reg = sum(np.sum(params[k] * params[k]) for k in L2_PARAMS)
    return data + l2 * reg


def backward(params, kind, ids, probs, state, y, l2):
    cache, h_last = state
    n = len(y)
    grads = {k: np.zeros_like(v) for k, v in params.items()}
    dlogits = probs.copy()
    dlogits[np.arange(n), y] -= 1
    dlogits /= n
    grads["Wo"] = h_last.T @ dlogits
    grads["bo"] = dlogits.sum(axis=0)
    dh = dlogits @ params["Wo"].T
    dc = np.zeros_like(dh)
    for t in range(len(cache) - 1, -1, -1):
        if kind == "rnn":
            x, h_prev, m, hn = cache[t]
            dz = (m * dh) * (1 - hn * hn)
            dh_carry = (1 - m) * dh
        else:
            x, h_prev, c_prev, m, i, f, o, g, tc = cache[t]
            dhn = m * dh
            dcn = m * dc + dhn * o * (1 - tc * tc)
            dz = np.concatenate([
                dcn * g * i * (1 - i),
                dcn * c_prev * f * (1 - f),
                dhn * tc * o * (1 - o),
                dcn * i * (1 - g * g),
            ], axis=1)
            dc = dcn * f + (1 - m) * dc
            dh_carry = (1 - m) * dh
        grads["Wx"] += x.T @ dz
        grads["Wh"] += h_prev.T @ dz
        grads["b"] += dz.sum(axis=0)
        np.add.at(grads["embed"], ids[:, t], dz @ params["Wx"].T)
        dh = dh_carry + dz @ params["Wh"].T
    for k in L2_PARAMS:
        grads[k] += 2 * l2 * params[k]
    return grads


def loss_and_grads(params, kind, ids, mask, y, l2=0.0):
    probs, state = forward(params, kind, ids, mask)
    return loss_value(params, probs, y, l2), backward(params, kind, ids, probs, state, y, l2)


def clip_by_global_norm(grads, max_norm):
    norm = np.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))
    if norm > max_norm:
        scale = max_norm / norm
        grads = {k: g * scale for k, g in grads.items()}
    return grads, norm


def numerical_gradient(params, kind, ids, mask, y, l2=0.0, step=1e-5):
    """Central finite differences of the training loss, element by element."""
    grads = {}
    for k, p in params.items():
        g = np.zeros_like(p)
        flat, gflat = p.reshape(-1), g.reshape(-1)
        for j in range(flat.size):
            old = flat[j]
            flat[j] = old + step
            up = loss_value(params, forward(params, kind, ids, mask)[0], y, l2)
            flat[j] = old - step
            down = loss_value(params, forward(params, kind, ids, mask)[0], y, l2)
            flat[j] = old
            gflat[j] = (up - down) / (2 * step)
        grads[k] = g
    return grads


class RecurrentModel(Classifier):
    def __init__(self, kind, classes, params, config=RecurrentConfig(), losses=()):
        if kind not in ("rnn", "lstm"):
            raise ConfigError(f"kind must be rnn or lstm, got {kind!r}")
        self.kind = kind
        self.classes = list(classes)
        self.params = params
        self.config = config
        self.losses = list(losses)

    @property
    def vocab_size(self):
        return self.params["embed"].shape[0]

    def scores(self, seqs):
        """Class probabilities; an empty sequence gets the uniform distribution."""
        out = np.full((len(seqs), len(self.classes)), 1.0 / len(self.classes))
        nonempty = [r for r, s in enumerate(seqs) if len(s) > 0]
        if nonempty:
            ids, mask = pad_batch([seqs[r] for r in nonempty], self.config.t_max)
            out[nonempty] = forward(self.params, self.kind, ids, mask)[0]
        return out

    def dumps(self):
        c = self.config
        hyper = {"V": self.vocab_size, "H": c.hidden, "dim": c.dim, "t_max": c.t_max,
                 "epochs": c.epochs, "batch_size": c.batch_size, "optimizer": c.optimizer.kind,
                 "lr": c.optimizer.learning_rate, "clip_norm": c.clip_norm, "l2": c.l2,
                 "seed": c.seed}
        return serialize.dumps(self.kind, hyper, self.classes,
                               {k: self.params[k] for k in PARAM_ORDER})

    @classmethod
    def loads(cls, text):
        kind, hyper, classes, blocks = serialize.loads(text)
        config = RecurrentConfig(
            hidden=int(hyper["H"]), dim=int(hyper["dim"]), t_max=int(hyper["t_max"]),
            epochs=int(hyper["epochs"]), batch_size=int(hyper["batch_size"]),
            optimizer=OptimizerConfig(hyper["optimizer"], float(hyper["lr"])),
            clip_norm=float(hyper["clip_norm"]), l2=float(hyper["l2"]), seed=int(hyper["seed"]),
        )
        return cls(kind, classes, {k: blocks[k] for k in PARAM_ORDER}, config)


def train_recurrent(seqs, labels, kind="lstm", config=RecurrentConfig(), vocab_size=None,
                    init_embeddings=None, seq_ids=None):
    """Minibatch BPTT with cross-entropy + ``l2 * |W|^2`` and global-norm clipping.

    ``init_embeddings`` (vocab_size x dim) seeds the embedding table, e.g.
    rows of a trained word2vec model; it is still fine-tuned.
    """
    if len(seqs) != len(labels):
        raise LengthMismatch(f"{len(seqs)} sequences but {len(labels)} labels")
    seq_ids = list(seq_ids) if seq_ids is not None else [str(i) for i in range(len(seqs))]
    for sid, s in zip(seq_ids, seqs):
        if len(s) == 0:
            raise EmptySequence(sid)
    if kind not in ("rnn", "lstm"):
        raise ConfigError(f"kind must be rnn or lstm, got {kind!r}")
    classes, y = class_index(labels)
    if vocab_size is None:
        vocab_size = 1 + max(max(s) for s in seqs)
    rng = np.random.default_rng(config.seed)
    params = init_params(kind, vocab_size, len(classes), config.hidden, config.dim, rng)
    if init_embeddings is not None:
        init_embeddings = np.asarray(init_embeddings, dtype=np.float64)
        if init_embeddings.shape != (vocab_size, config.dim):
            raise ConfigError(f"init_embeddings must have shape ({vocab_size}, {config.dim})")
        params["embed"] = init_embeddings.copy()

    state, losses = None, []
    n = len(seqs)
    for _ in range(config.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, config.batch_size):
            batch = order[start:start + config.batch_size]
            ids, mask = pad_batch([seqs[i] for i in batch], config.t_max)
            value, grads = loss_and_grads(params, kind, ids, mask, y[batch], config.l2)
            grads, _ = clip_by_global_norm(grads, config.clip_norm)
            params, state = optimizer_step(config.optimizer, params, grads, state)
            total += value * len(batch)
        losses.append(total / n)
    return RecurrentModel(kind, classes, params, config, losses)


def predict_recurrent(model, seq):
    """``(label, class probabilities)``; input longer than ``t_max`` is truncated."""
    return model.predict_one(seq)

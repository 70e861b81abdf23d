"""One-vs-rest linear SVM trained by hinge-loss subgradient descent.

Per class the objective is ``mean(max(0, 1 - y * (w.x + b))) + lam * (|w|^2 + b^2)``.
The bias is handled as the weight of a constant extra feature, so it is
shrunk along with the weights; left unregularized, Pegasos' large early
steps would fix it at an arbitrary value.

``mode="stochastic"`` is Pegasos: one pass per epoch over a seeded
shuffle, step ``1 / (2 * lam * t)``.  ``mode="batch"`` takes full-batch
subgradient steps of size ``step`` and halves the step (up to
``max_halvings`` times) until the objective does not increase; if no
trial step helps, the weights stay put.  That makes the per-epoch
objective non-increasing by construction.
"""

import numpy as np

from ..errors import ConfigError, DimensionMismatch, LengthMismatch, SingleClass
from . import serialize
from .base import Classifier, class_index


class LinearSvmModel(Classifier):
    kind = "svm"

    def __init__(self, classes, weights, biases, lam, objective_history=None):
        self.classes = list(classes)
        self.weights = np.asarray(weights, dtype=np.float64)
        self.biases = np.asarray(biases, dtype=np.float64)
        self.lam = float(lam)
        self.objective_history = objective_history if objective_history is not None else []

    @property
    def n_features(self):
        return self.weights.shape[1]

    def scores(self, X):
        """Per-class margins ``w_c . x + b_c``."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(f"expected {self.n_features} features, got {X.shape[1]}")
        return X @ self.weights.T + self.biases

    def dumps(self):
        return serialize.dumps(self.kind, {"F": self.n_features, "lam": self.lam}, self.classes,
                               {"weights": self.weights, "biases": self.biases})

    @classmethod
    def loads(cls, text):
        _, hyper, classes, blocks = serialize.loads(text)
        return cls(classes, blocks["weights"], blocks["biases"], float(hyper["lam"]))


def _augment(X):
    return np.hstack([X, np.ones((X.shape[0], 1))])


def svm_objective(W, X, Y, lam):
    """Per-class objectives for augmented ``W`` (bias last) and ``X`` (ones last).

    ``Y`` holds +-1 targets, shape (n, n_classes).
    """
    hinge = np.maximum(0.0, 1.0 - Y * (X @ W.T)).mean(axis=0)
    return hinge + lam * np.sum(W * W, axis=1)


def _pegasos_epoch(W, X, Y, lam, order, t0):
    t = t0
    for i in order:
        t += 1
        eta = 1.0 / (2.0 * lam * t)
        x, y = X[i], Y[i]
        violated = y * (W @ x) < 1.0
        W *= 1.0 - eta * 2.0 * lam
        if violated.any():
            W[violated] += eta * y[violated, None] * x
    return t


def _batch_epoch(W, X, Y, lam, step, max_halvings):
    n = X.shape[0]
    current = svm_objective(W, X, Y, lam)
    viol = (Y * (X @ W.T) < 1.0).astype(np.float64)
    grad = 2.0 * lam * W - ((viol * Y).T @ X) / n
    for c in range(W.shape[0]):
        eta = step
        for _ in range(max_halvings + 1):
            trial = W[c] - eta * grad[c]
            if svm_objective(trial[None, :], X, Y[:, c:c + 1], lam)[0] <= current[c]:
                W[c] = trial
                break
            eta *= 0.5


def train_svm(X, labels, lam=1e-3, epochs=50, seed=0, mode="stochastic", step=0.1,
              max_halvings=30):
    if not lam > 0:
        raise ConfigError("lam must be > 0")
    if mode not in ("stochastic", "batch"):
        raise ConfigError(f"unknown SVM mode {mode!r}")
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if len(labels) != X.shape[0]:
        raise LengthMismatch(f"{X.shape[0]} rows but {len(labels)} labels")
    classes, y = class_index(labels)
    if len(classes) < 2:
        raise SingleClass("SVM training needs at least two classes")
    Y = np.where(y[:, None] == np.arange(len(classes))[None, :], 1.0, -1.0)
    Xa = _augment(X)
    W = np.zeros((len(classes), Xa.shape[1]))
    rng = np.random.default_rng(seed)
    history = [svm_objective(W, Xa, Y, lam)]
    t = 0
    for _ in range(epochs):
        if mode == "stochastic":
            t = _pegasos_epoch(W, Xa, Y, lam, rng.permutation(X.shape[0]), t)
        else:
            _batch_epoch(W, Xa, Y, lam, step, max_halvings)
        history.append(svm_objective(W, Xa, Y, lam))
    return LinearSvmModel(classes, W[:, :-1], W[:, -1], lam, np.array(history))


def predict_svm(model, x):
    """``(label, margins)`` for one feature vector."""
    return model.predict_one(x)

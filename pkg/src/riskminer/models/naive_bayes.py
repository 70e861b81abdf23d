"""Multinomial Naive Bayes with additive (Laplace) smoothing."""

import numpy as np

from ..errors import ConfigError, DimensionMismatch, EmptyClass, LengthMismatch
from . import serialize
from .base import Classifier, class_index
from .nn import softmax


class NBModel(Classifier):
    kind = "nb"

    def __init__(self, classes, log_prior, log_likelihood, alpha):
        self.classes = list(classes)
        self.log_prior = np.asarray(log_prior, dtype=np.float64)
        self.log_likelihood = np.asarray(log_likelihood, dtype=np.float64)
        self.alpha = float(alpha)

    @property
    def n_features(self):
        return self.log_likelihood.shape[1]

    def scores(self, X):
        """Per-class log-posterior up to a shared additive constant."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(f"expected {self.n_features} features, got {X.shape[1]}")
        return self.log_prior + X @ self.log_likelihood.T

    def ranking_scores(self, X):
        """Normalized class posteriors; raw log-joint scores grow with document length."""
        return softmax(self.scores(X), axis=1)

    def dumps(self):
        return serialize.dumps(self.kind, {"V": self.n_features, "alpha": self.alpha}, self.classes,
                               {"log_prior": self.log_prior, "log_likelihood": self.log_likelihood})

    @classmethod
    def loads(cls, text):
        _, hyper, classes, blocks = serialize.loads(text)
        return cls(classes, blocks["log_prior"], blocks["log_likelihood"], float(hyper["alpha"]))


def train_nb(X, labels, alpha=1.0, classes=None):
    """Fit priors and smoothed token likelihoods from a document-term count matrix.

    ``classes`` may list labels that must each have training documents;
    a listed label with none raises ``EmptyClass``.
    """
    if not alpha > 0:
        raise ConfigError("smoothing alpha must be > 0")
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if len(labels) != X.shape[0]:
        raise LengthMismatch(f"{X.shape[0]} rows but {len(labels)} labels")
    found, y = class_index(labels)
    if classes is not None:
        missing = sorted(set(classes) - set(found))
        if missing:
            raise EmptyClass(f"no training documents for class(es) {missing}")
    n_classes, size = len(found), X.shape[1]
    counts = np.zeros((n_classes, size))
    np.add.at(counts, y, X)
    doc_counts = np.bincount(y, minlength=n_classes)
    log_prior = np.log(doc_counts / len(y))
    totals = counts.sum(axis=1, keepdims=True)
    log_likelihood = np.log(counts + alpha) - np.log(totals + alpha * size)
    return NBModel(found, log_prior, log_likelihood, alpha)


def predict_nb(model, x):
    """``(label, log_posteriors)`` for one count vector."""
    return model.predict_one(x)

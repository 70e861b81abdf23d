"""Classifiers (Naive Bayes, linear SVM, random forest, RNN, LSTM) and training primitives."""

from .base import Classifier
from .forest import ForestConfig, ForestModel, predict_forest, train_forest
from .naive_bayes import NBModel, predict_nb, train_nb
from .nn import (
    OptimizerConfig,
    OptimizerState,
    RegularizationConfig,
    activation,
    loss,
    optimizer_step,
    penalty,
    penalty_grad,
    softmax,
)
from .recurrent import RecurrentConfig, RecurrentModel, predict_recurrent, train_recurrent
from .serialize import load_model, loads_model, save_model
from .svm import LinearSvmModel, predict_svm, train_svm

MODEL_KINDS = ("nb", "svm", "forest", "rnn", "lstm")

__all__ = [
    "Classifier", "ForestConfig", "ForestModel", "LinearSvmModel", "MODEL_KINDS", "NBModel",
    "OptimizerConfig", "OptimizerState", "RecurrentConfig", "RecurrentModel",
    "RegularizationConfig", "activation", "load_model", "loads_model", "loss", "optimizer_step", "penalty",
    "penalty_grad", "predict_forest", "predict_nb", "predict_recurrent", "predict_svm",
    "save_model", "softmax", "train_forest", "train_nb", "train_recurrent", "train_svm",
]

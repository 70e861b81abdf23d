"""Activations, losses, first-order optimizers and L1/L2 penalties.

Parameters are passed around as ``dict[str, ndarray]`` (a bare array is
treated as ``{"": array}``).  ``optimizer_step`` is pure: it returns new
arrays and a new state and never mutates its inputs.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, NotADistribution, ShapeMismatch

PROB_FLOOR = 1e-12


def relu(x):
    return np.maximum(x, 0)


def sigmoid(x):
    x = np.asarray(x)
    # split by sign so neither branch overflows
    out = np.empty_like(x, dtype=np.result_type(x, np.float64))
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def tanh(x):
    return np.tanh(x)


ACTIVATIONS = {"relu": relu, "sigmoid": sigmoid, "tanh": tanh}


def activation(kind, x):
    try:
        fn = ACTIVATIONS[kind]
    except KeyError:
        raise ConfigError(f"unknown activation {kind!r}") from None
    scalar = np.ndim(x) == 0
    y = fn(np.atleast_1d(np.asarray(x, dtype=np.float64)))
    return float(y[0]) if scalar else y


def softmax(logits, axis=-1):
    z = logits - np.max(logits, axis=axis, keepdims=True)
    e = np.exp(z)
    return e / np.sum(e, axis=axis, keepdims=True)


def _target_index(target, n):
    t = np.asarray(target)
    if t.ndim == 0:
        idx = int(t)
        if not 0 <= idx < n:
            raise NotADistribution(f"class index {idx} outside 0..{n - 1}")
        return idx
    if t.shape != (n,) or not np.all((t == 0) | (t == 1)) or t.sum() != 1:
        raise NotADistribution("target must be a class index or a one-hot vector")
    return int(np.argmax(t))


def loss(kind, prediction, target):
    """``mse`` (mean squared error) or ``cross_entropy`` (``-ln p[target]``, p floored at 1e-12)."""
    prediction = np.asarray(prediction, dtype=np.float64)
    if kind == "mse":
        target = np.asarray(target, dtype=np.float64)
        if prediction.shape != target.shape:
            raise ShapeMismatch(f"prediction {prediction.shape} vs target {target.shape}")
        return float(np.mean((prediction - target) ** 2))
    if kind == "cross_entropy":
        if prediction.ndim != 1 or np.any(prediction < 0) or abs(prediction.sum() - 1) > 1e-6:
            raise NotADistribution("prediction must be a probability vector")
        idx = _target_index(target, len(prediction))
        return float(-np.log(max(prediction[idx], PROB_FLOOR)))
    raise ConfigError(f"unknown loss {kind!r}")


# --- optimizers -------------------------------------------------------------

@dataclass(frozen=True)
class OptimizerConfig:
    kind: str = "adam"
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    decay: float = 0.9

    def __post_init__(self):
        if self.kind not in ("sgd", "adam", "rmsprop"):
            raise ConfigError(f"unknown optimizer {self.kind!r}")
        if not self.learning_rate > 0:
            raise ConfigError("learning_rate must be > 0")
        for name in ("beta1", "beta2", "decay"):
            if not 0 < getattr(self, name) < 1:
                raise ConfigError(f"{name} must lie in (0, 1)")
        if not self.epsilon > 0:
            raise ConfigError("epsilon must be > 0")


@dataclass
class OptimizerState:
    step: int = 0
    first: dict = field(default_factory=dict)   # Adam first moment
    second: dict = field(default_factory=dict)  # Adam second moment / RMSprop mean square


def _as_dict(x):
    return (x, False) if isinstance(x, dict) else ({"": np.asarray(x)}, True)


def optimizer_step(config, params, grads, state=None):
    """One update; returns ``(new_params, new_state)``."""
    params, bare = _as_dict(params)
    grads, _ = _as_dict(grads)
    state = state if state is not None else OptimizerState()
    if params.keys() != grads.keys():
        raise ShapeMismatch("params and grads have different keys")
    for k in params:
        if np.shape(params[k]) != np.shape(grads[k]):
            raise ShapeMismatch(f"{k!r}: param {np.shape(params[k])} vs grad {np.shape(grads[k])}")
        for acc in (state.first, state.second):
            if k in acc and np.shape(acc[k]) != np.shape(params[k]):
                raise ShapeMismatch(f"{k!r}: optimizer state has shape {np.shape(acc[k])}")

    t = state.step + 1
    lr = config.learning_rate
    new_params, first, second = {}, {}, {}
    for k, p in params.items():
        g = grads[k]
        if config.kind == "sgd":
            new_params[k] = p - lr * g
        elif config.kind == "adam":
            m = config.beta1 * state.first.get(k, 0) + (1 - config.beta1) * g
            v = config.beta2 * state.second.get(k, 0) + (1 - config.beta2) * g * g
            m_hat = m / (1 - config.beta1 ** t)
            v_hat = v / (1 - config.beta2 ** t)
            new_params[k] = p - lr * m_hat / (np.sqrt(v_hat) + config.epsilon)
            first[k], second[k] = m, v
        else:
            s = config.decay * state.second.get(k, 0) + (1 - config.decay) * g * g
            new_params[k] = p - lr * g / (np.sqrt(s) + config.epsilon)
            second[k] = s
    new_state = OptimizerState(t, first, second)
    return (new_params[""] if bare else new_params), new_state


# --- regularization ---------------------------------------------------------

@dataclass(frozen=True)
class RegularizationConfig:
    l1: float = 0.0
    l2: float = 0.0

    def __post_init__(self):
        for name in ("l1", "l2"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0):
                raise ConfigError(f"{name} must be finite and >= 0")


def _arrays(weights):
    if isinstance(weights, dict):
        return list(weights.values())
    if isinstance(weights, (list, tuple)) and weights and isinstance(weights[0], np.ndarray):
        return list(weights)
    return [np.asarray(weights, dtype=np.float64)]


def penalty(reg, weights):
    """``l1 * sum|w| + l2 * sum w^2`` over one array, a list of arrays or a dict."""
    total = 0.0
    for w in _arrays(weights):
        total += reg.l1 * float(np.abs(w).sum()) + reg.l2 * float((w * w).sum())
    return total


def penalty_grad(reg, w):
    """Subgradient of ``penalty`` for a single array (sign(0) taken as 0)."""
    return reg.l1 * np.sign(w) + 2.0 * reg.l2 * w

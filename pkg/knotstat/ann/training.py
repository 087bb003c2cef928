import logging
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from ..config import DEFAULT_SEED
from ..exceptions import DivergenceError, DomainError
from ..stats_linear import metric_report
from .network import (
    ActivationKind,
    Standardization,
    _batch,
    _forward_batch,
    backprop,
    init_network,
    loss_mse_batch,
)


__all__ = ["TrainConfig", "train", "evaluate", "grad_check"]

logger = logging.getLogger(__name__)


ALL_ROWS_AT_KINKS_MSG = (
    "grad_check: every row has a ReLU pre-activation within {margin:g} of 0, nothing was checked",
    RuntimeWarning,
)


@dataclass(frozen=True)
class TrainConfig:
    """
    Mini-batch gradient descent with momentum

        v <- momentum * v - learning_rate * grad
        theta <- theta + v

    The training rows are reshuffled every epoch with a generator derived
    from ``seed``; the same config on the same data gives the same network.
    """

    learning_rate: float = 1e-3
    batch_size: int = 32
    epochs: int = 400
    momentum: float = 0.9
    seed: int = DEFAULT_SEED
    input_standardize: bool = True

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise DomainError("learning_rate must be positive")
        if self.batch_size < 1 or self.epochs < 1:
            raise DomainError("batch_size and epochs must be positive")
        if not 0 <= self.momentum < 1:
            raise DomainError("momentum must lie in [0, 1)")

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, obj):
        return cls(**obj)


def train(spec, X, y, cfg=None):
    """ Returns (network, full-training-set MSE after every epoch) """
    cfg = cfg or TrainConfig()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[1] != spec.input_width:
        raise DomainError(
            "expected inputs of width {}, got shape {}".format(spec.input_width, X.shape)
        )
    if len(X) < cfg.batch_size:
        raise DomainError(
            "need at least batch_size={} rows, got {}".format(cfg.batch_size, len(X))
        )

    net = init_network(spec, cfg.seed)
    if cfg.input_standardize:
        net.standardization = Standardization.fit(X)
        X = net.standardization.apply(X)

    shuffler = np.random.default_rng([cfg.seed, 1])
    velocity_w = [np.zeros_like(W) for W in net.weights]
    velocity_b = [np.zeros_like(b) for b in net.biases]
    history = np.empty(cfg.epochs)

    for epoch in range(cfg.epochs):
        order = shuffler.permutation(len(X))
        for start in range(0, len(X), cfg.batch_size):
            rows = order[start:start + cfg.batch_size]
            grads = backprop(net, X[rows], y[rows])
            for t in range(len(net.weights)):
                velocity_w[t] = cfg.momentum * velocity_w[t] - cfg.learning_rate * grads.weights[t]
                velocity_b[t] = cfg.momentum * velocity_b[t] - cfg.learning_rate * grads.biases[t]
                net.weights[t] += velocity_w[t]
                net.biases[t] += velocity_b[t]
        history[epoch] = loss_mse_batch(net, X, y)
        if not np.isfinite(history[epoch]):
            raise DivergenceError(
                "training diverged at epoch {} (loss {}); try a smaller learning rate "
                "than {:g}".format(epoch + 1, history[epoch], cfg.learning_rate)
            )
        logger.debug("epoch %d loss %.6g", epoch + 1, history[epoch])

    logger.info(
        "trained %s for %d epochs: loss %.6g -> %.6g",
        spec.layer_sizes,
        cfg.epochs,
        history[0],
        history[-1],
    )
    return net, history


def evaluate(net, X_test, y_test, baseline_mse=None):
    """ MetricReport of ``net.predict`` on the test rows; mape is None for zero targets """
    pred = net.predict(X_test)
    return metric_report(pred, y_test, baseline_mse=baseline_mse)


def _parameters(net):
    for array in list(net.weights) + list(net.biases):
        for index in np.ndindex(array.shape):
            yield array, index


def grad_check(net, X, y, eps=1e-5):
    """
    Largest relative deviation between backprop and central differences

        |analytic - numeric| / max(1e-12, |analytic| + |numeric|)

    over all parameters. For ReLU networks, rows with a hidden pre-activation
    within 10 * eps of 0 are left out, the loss has a kink there.
    """
    if not 1e-7 <= eps <= 1e-3:
        raise DomainError("eps must lie in [1e-7, 1e-3], got {:g}".format(eps))
    X = _batch(net, X)
    y = np.asarray(y, dtype=float)

    if net.spec.activation is ActivationKind.RELU and net.spec.n_hidden > 0:
        margin = 10 * eps
        pre_activations = _forward_batch(net, X)[1][:-1]
        keep = np.ones(len(X), dtype=bool)
        for z in pre_activations:
            keep &= np.all(np.abs(z) > margin, axis=1)
        if not keep.any():
            message, category = ALL_ROWS_AT_KINKS_MSG
            warnings.warn(message.format(margin=margin), category)
            return 0.0
        X, y = X[keep], y[keep]

    checked = net.copy()
    analytic = backprop(checked, X, y)
    analytic_values = {}
    for t, W in enumerate(analytic.weights):
        analytic_values[id(checked.weights[t])] = W
    for t, b in enumerate(analytic.biases):
        analytic_values[id(checked.biases[t])] = b

    worst = 0.0
    for array, index in _parameters(checked):
        original = array[index]
        array[index] = original + eps
        plus = loss_mse_batch(checked, X, y)
        array[index] = original - eps
        minus = loss_mse_batch(checked, X, y)
        array[index] = original
        numeric = (plus - minus) / (2 * eps)
        exact = analytic_values[id(array)][index]
        deviation = abs(exact - numeric) / max(1e-12, abs(exact) + abs(numeric))
        worst = max(worst, deviation)
    return float(worst)

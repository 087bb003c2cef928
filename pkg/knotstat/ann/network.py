import enum
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import ujson

from ..exceptions import DataError, DomainError, MissingDataError


__all__ = [
    "ActivationKind",
    "NetworkSpec",
    "Network",
    "Gradients",
    "param_count",
    "init_network",
    "forward",
    "loss_mse_batch",
    "backprop",
    "network_to_dict",
    "network_from_dict",
    "dump_network",
    "load_network",
]


class ActivationKind(enum.Enum):
    RELU = "relu"
    TANH = "tanh"
    LOGISTIC = "logistic"

    def __call__(self, z):
        if self is ActivationKind.RELU:
            return np.maximum(z, 0.0)
        if self is ActivationKind.TANH:
            return np.tanh(z)
        return 0.5 * (1.0 + np.tanh(0.5 * z))

    def derivative(self, z):
        """ d psi / dz at the pre-activation z (ReLU'(0) = 0) """
        if self is ActivationKind.RELU:
            return (z > 0).astype(float)
        if self is ActivationKind.TANH:
            return 1.0 - np.tanh(z) ** 2
        s = self(z)
        return s * (1.0 - s)


@dataclass(frozen=True)
class NetworkSpec:
    """
    layer_sizes = (k_0, ..., k_{p+1}) with k_{p+1} = 1

    p = len(layer_sizes) - 2 hidden layers, each followed by ``activation``.
    (m, 1) is a plain affine model.
    """

    layer_sizes: Tuple[int, ...]
    activation: ActivationKind = ActivationKind.RELU

    def __post_init__(self):
        sizes = tuple(int(k) for k in self.layer_sizes)
        if len(sizes) < 2:
            raise DomainError("a network needs at least an input and an output size")
        if any(k <= 0 for k in sizes):
            raise DomainError("layer sizes must be positive, got {}".format(sizes))
        if sizes[-1] != 1:
            raise DomainError("the output layer must have size 1, got {}".format(sizes[-1]))
        object.__setattr__(self, "layer_sizes", sizes)
        object.__setattr__(self, "activation", ActivationKind(self.activation))

    @classmethod
    def from_hidden(cls, input_width, hidden=(), activation=ActivationKind.RELU):
        return cls((input_width,) + tuple(hidden) + (1,), activation)

    @property
    def input_width(self):
        return self.layer_sizes[0]

    @property
    def n_hidden(self):
        return len(self.layer_sizes) - 2


@dataclass
class Gradients:
    weights: List[np.ndarray]
    biases: List[np.ndarray]


@dataclass
class Network:
    """
    Weights W_t (k_{t+1} x k_t) and biases b_t (k_{t+1}) of a fully connected
    network, plus what is needed to feed it raw data:

        standardization:

            Input column means/scales applied by ``predict`` (None = off)

        features:

            Free form description of how the input vectors were built
            (e.g. {"input": "jones_vector", "window": [-7, 3]})
    """

    spec: NetworkSpec
    weights: List[np.ndarray]
    biases: List[np.ndarray]
    standardization: Optional["Standardization"] = None
    features: dict = field(default_factory=dict)

    def __post_init__(self):
        sizes = self.spec.layer_sizes
        if len(self.weights) != len(sizes) - 1 or len(self.biases) != len(sizes) - 1:
            raise DataError("network needs {} weight matrices".format(len(sizes) - 1))
        for t, (W, b) in enumerate(zip(self.weights, self.biases)):
            if W.shape != (sizes[t + 1], sizes[t]) or b.shape != (sizes[t + 1],):
                raise DataError(
                    "layer {} has shapes {} / {}, expected {} / {}".format(
                        t, W.shape, b.shape, (sizes[t + 1], sizes[t]), (sizes[t + 1],)
                    )
                )
            if not (np.all(np.isfinite(W)) and np.all(np.isfinite(b))):
                raise DataError("layer {} has non-finite parameters".format(t))

    def copy(self):
        return Network(
            spec=self.spec,
            weights=[W.copy() for W in self.weights],
            biases=[b.copy() for b in self.biases],
            standardization=self.standardization,
            features=dict(self.features),
        )

    def predict(self, X):
        """ Batched forward pass on raw inputs, standardizing them first if configured """
        X = _batch(self, X)
        if self.standardization is not None:
            X = self.standardization.apply(X)
        return _forward_batch(self, X)[0][-1][:, 0]


@dataclass(frozen=True)
class Standardization:
    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, X):
        X = np.asarray(X, dtype=float)
        mean = X.mean(axis=0)
        scale = X.std(axis=0)
        # Constant columns (padding) pass through centred
        scale = np.where(scale > 0, scale, 1.0)
        return cls(mean=mean, scale=scale)

    def apply(self, X):
        return (np.asarray(X, dtype=float) - self.mean) / self.scale


def param_count(spec):
    sizes = spec.layer_sizes
    n_weights = sum(sizes[t] * sizes[t + 1] for t in range(len(sizes) - 1))
    n_biases = sum(sizes[1:])
    return n_weights, n_biases


def init_network(spec, seed):
    """ W_t ~ U[-s, s] with s = sqrt(6 / (k_t + k_{t+1})), zero biases """
    rng = np.random.default_rng(seed)
    sizes = spec.layer_sizes
    weights, biases = [], []
    for t in range(len(sizes) - 1):
        s = np.sqrt(6.0 / (sizes[t] + sizes[t + 1]))
        weights.append(rng.uniform(-s, s, size=(sizes[t + 1], sizes[t])))
        biases.append(np.zeros(sizes[t + 1]))
    return Network(spec=spec, weights=weights, biases=biases)


def _batch(net, X):
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != net.spec.input_width:
        raise DomainError(
            "expected inputs of width {}, got shape {}".format(net.spec.input_width, X.shape)
        )
    return X


def _forward_batch(net, X):
    """ Returns (activations a_0..a_{p+1}, pre-activations z_1..z_{p+1}) """
    activations, pre_activations = [X], []
    last = len(net.weights) - 1
    for t, (W, b) in enumerate(zip(net.weights, net.biases)):
        z = activations[-1] @ W.T + b
        pre_activations.append(z)
        # No activation after the final affine map
        activations.append(z if t == last else net.spec.activation(z))
    return activations, pre_activations


def forward(net, x):
    """ f(x) = phi_p(psi(phi_{p-1}( ... psi(phi_0(x))))) on one raw input vector """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) != net.spec.input_width:
        raise DomainError(
            "expected an input vector of length {}, got shape {}".format(
                net.spec.input_width, x.shape
            )
        )
    return float(_forward_batch(net, x[None, :])[0][-1][0, 0])


def _targets(X, y):
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or len(y) != len(X):
        raise DomainError("got {} targets for {} inputs".format(y.shape, len(X)))
    if len(y) == 0:
        raise MissingDataError("empty batch")
    return y


def loss_mse_batch(net, X, y):
    X = _batch(net, X)
    y = _targets(X, y)
    pred = _forward_batch(net, X)[0][-1][:, 0]
    return float(np.mean((pred - y) ** 2))


def backprop(net, X, y):
    """ Exact gradient of loss_mse_batch with respect to every W_t and b_t """
    X = _batch(net, X)
    y = _targets(X, y)
    activations, pre_activations = _forward_batch(net, X)
    n = len(y)
    delta = (2.0 / n) * (activations[-1] - y[:, None])
    weight_grads = [None] * len(net.weights)
    bias_grads = [None] * len(net.biases)
    for t in range(len(net.weights) - 1, -1, -1):
        weight_grads[t] = delta.T @ activations[t]
        bias_grads[t] = delta.sum(axis=0)
        if t > 0:
            delta = (delta @ net.weights[t]) * net.spec.activation.derivative(
                pre_activations[t - 1]
            )
    return Gradients(weights=weight_grads, biases=bias_grads)


#### ------------ Serialization ------------- ####


def _hex_matrix(array):
    return [[float(v).hex() for v in row] for row in np.atleast_2d(array)]


def _hex_vector(array):
    return [float(v).hex() for v in array]


def _unhex(values):
    return np.array(
        [[float.fromhex(v) for v in row] if isinstance(row, list) else float.fromhex(row)
         for row in values],
        dtype=float,
    )


def network_to_dict(net):
    """
    JSON-ready dict. Parameters are hex floats (float.hex), which makes the
    round trip exact.
    """
    standardization = None
    if net.standardization is not None:
        standardization = {
            "mean": _hex_vector(net.standardization.mean),
            "scale": _hex_vector(net.standardization.scale),
        }
    return {
        "spec": list(net.spec.layer_sizes),
        "activation": net.spec.activation.value,
        "standardization": standardization,
        "features": net.features,
        "weights": [_hex_matrix(W) for W in net.weights],
        "biases": [_hex_vector(b) for b in net.biases],
    }


def network_from_dict(obj):
    try:
        spec = NetworkSpec(tuple(obj["spec"]), ActivationKind(obj["activation"]))
        weights = [_unhex(W).reshape(spec.layer_sizes[t + 1], spec.layer_sizes[t])
                   for t, W in enumerate(obj["weights"])]
        biases = [_unhex(b) for b in obj["biases"]]
        standardization = None
        if obj.get("standardization"):
            standardization = Standardization(
                mean=_unhex(obj["standardization"]["mean"]),
                scale=_unhex(obj["standardization"]["scale"]),
            )
    except (KeyError, TypeError, ValueError) as e:
        raise DataError("not a serialized network: {}".format(e))
    return Network(
        spec=spec,
        weights=weights,
        biases=biases,
        standardization=standardization,
        features=dict(obj.get("features") or {}),
    )


def dump_network(net, path, encoder=ujson.dumps):
    with open(path, "w", encoding="utf-8") as f:
        f.write(encoder(network_to_dict(net), sort_keys=True))


def load_network(path, decoder=ujson.loads):
    try:
        with open(path, "r", encoding="utf-8") as f:
            return network_from_dict(decoder(f.read()))
    except FileNotFoundError:
        raise MissingDataError("network file not found: {}".format(path))

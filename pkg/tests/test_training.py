import numpy as np
import pytest

from knotstat.ann import ActivationKind, NetworkSpec, TrainConfig, evaluate, grad_check, init_network, train
from knotstat.exceptions import DivergenceError, DomainError


def test_train_config_validation():
    for options in [{"learning_rate": 0.0}, {"batch_size": 0}, {"epochs": 0}, {"momentum": 1.0}]:
        with pytest.raises(DomainError):
            TrainConfig(**options)
    cfg = TrainConfig(epochs=3)
    assert TrainConfig.from_dict(cfg.to_dict()) == cfg


@pytest.mark.parametrize("draw", range(20))
def test_grad_check_tanh(draw):
    rng = np.random.default_rng(draw)
    net = init_network(NetworkSpec((4, 8, 8, 1), ActivationKind.TANH), draw)
    for b in net.biases:
        b[:] = rng.normal(scale=0.1, size=b.shape)
    X, y = rng.normal(size=(6, 4)), rng.normal(size=6)
    assert grad_check(net, X, y, eps=1e-5) < 1e-5


@pytest.mark.parametrize("draw", range(20))
def test_grad_check_relu_away_from_kinks(draw):
    rng = np.random.default_rng(100 + draw)
    net = init_network(NetworkSpec((4, 8, 8, 1)), draw)
    X, y = rng.normal(size=(6, 4)), rng.normal(size=6)
    assert grad_check(net, X, y, eps=1e-5) < 1e-5


def test_grad_check_eps_range():
    net = init_network(NetworkSpec((2, 1)), 0)
    with pytest.raises(DomainError):
        grad_check(net, np.ones((2, 2)), np.ones(2), eps=1e-2)


def test_grad_check_all_rows_at_kinks():
    net = init_network(NetworkSpec((2, 3, 1)), 0)
    with pytest.warns(RuntimeWarning):
        assert grad_check(net, np.zeros((3, 2)), np.ones(3)) == 0.0


def test_train_affine_target():
    x = np.linspace(-1, 1, 200)[:, None]
    y = 3 * x[:, 0] - 2
    net, history = train(NetworkSpec((1, 5, 1)), x, y)
    assert len(history) == 400
    assert history[-1] < 1e-3
    assert history[-1] < history[0]
    assert np.allclose(net.predict(x), y, atol=0.1)


def test_train_absolute_value():
    x = np.linspace(-1, 1, 200)[:, None]
    y = np.abs(x[:, 0])
    net, history = train(NetworkSpec((1, 8, 1)), x, y)
    assert history[-1] < 1e-3
    assert history[-1] < history[0]
    _, again = train(NetworkSpec((1, 8, 1)), x, y)
    assert np.array_equal(history, again)


def test_train_is_deterministic():
    rng = np.random.default_rng(4)
    X, y = rng.normal(size=(40, 3)), rng.normal(size=40)
    cfg = TrainConfig(epochs=15, batch_size=8, seed=9)
    a, history_a = train(NetworkSpec((3, 6, 1), ActivationKind.TANH), X, y, cfg)
    b, history_b = train(NetworkSpec((3, 6, 1), ActivationKind.TANH), X, y, cfg)
    assert np.array_equal(history_a, history_b)
    for wa, wb in zip(a.weights, b.weights):
        assert np.allclose(wa, wb, atol=1e-12)


def test_train_preconditions():
    with pytest.raises(DomainError):
        train(NetworkSpec((2, 1)), np.ones((10, 2)), np.ones(10))
    with pytest.raises(DomainError):
        train(NetworkSpec((3, 1)), np.ones((40, 2)), np.ones(40))


def test_train_divergence():
    x = np.linspace(0, 100, 64)[:, None]
    cfg = TrainConfig(learning_rate=10.0, epochs=50, input_standardize=False)
    with pytest.raises(DivergenceError) as e:
        train(NetworkSpec((1, 1)), x, 5 * x[:, 0], cfg)
    assert "learning rate" in str(e.value)


def test_evaluate():
    net = init_network(NetworkSpec((1, 1)), 0)
    net.weights[0][:] = 2.0
    net.biases[0][:] = 1.0
    X = np.array([[1.0], [2.0]])
    report = evaluate(net, X, [3.0, 5.0])
    assert report.mse == 0.0 and report.mape == 0.0
    report = evaluate(net, X, [0.0, 5.0], baseline_mse=4.5)
    assert report.mape is None
    assert report.mse == pytest.approx(4.5)
    assert report.relative_mse == pytest.approx(1.0)

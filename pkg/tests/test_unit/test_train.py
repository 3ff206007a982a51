"""Unit tests for the dense SGD trainer."""
import numpy as np
import pytest
from pydantic import ValidationError

from nesyverify.nn import (
    Conv2d,
    Dense,
    Flatten,
    Network,
    Softmax,
    TrainingParams,
    accuracy,
    init_dense_network,
    train_dense,
)
from nesyverify.utils.errors import TrainingError


def _blobs(rng, n=200):
    labels = rng.integers(0, 2, size=n)
    centres = np.where(labels[:, None] == 1, 0.8, 0.2)
    x = np.clip(centres + rng.normal(0.0, 0.05, size=(n, 2)), 0.0, 1.0)
    return x, labels


def _quadrants(rng, n=400):
    x = rng.uniform(0.0, 0.4, size=(n, 2)) + 0.6 * rng.integers(0, 2, size=(n, 2))
    return x, (x >= 0.5).astype(np.float64)


class TestTrainingParams:
    def test_defaults(self):
        hp = TrainingParams()
        assert hp.lr == 0.1 and hp.epochs == 20 and hp.batch == 32 and hp.seed == 0

    def test_frozen(self):
        hp = TrainingParams()
        with pytest.raises(ValidationError):
            hp.lr = 0.5

    @pytest.mark.parametrize("field,value", [("lr", 0.0), ("epochs", 0), ("batch", 0)])
    def test_bounds(self, field, value):
        with pytest.raises(ValidationError):
            TrainingParams(**{field: value})


class TestTrainDense:
    def test_softmax_learns_blobs(self, rng):
        x, y = _blobs(rng)
        net = init_dense_network((2,), (8,), 2, "softmax", rng)
        trained = train_dense(net, x, y, TrainingParams(lr=0.5, epochs=30, batch=16, seed=1))
        assert accuracy(trained, x, y) >= 0.95

    def test_sigmoid_learns_quadrants(self, rng):
        x, y = _quadrants(rng)
        net = init_dense_network((2,), (16,), 2, "sigmoid", rng)
        trained = train_dense(net, x, y, TrainingParams(lr=0.5, epochs=60, batch=16, seed=1))
        assert accuracy(trained, x, y) >= 0.85

    def test_input_network_untouched(self, rng):
        x, y = _blobs(rng, 40)
        net = init_dense_network((2,), (4,), 2, "softmax", rng)
        before = net.layers[0].weight.copy()
        train_dense(net, x, y, TrainingParams(epochs=2))
        assert np.array_equal(net.layers[0].weight, before)

    def test_deterministic(self):
        x, y = _blobs(np.random.default_rng(5), 60)
        hp = TrainingParams(lr=0.2, epochs=3, batch=8, seed=9)
        runs = []
        for _ in range(2):
            net = init_dense_network((2,), (4,), 2, "softmax", np.random.default_rng(3))
            runs.append(train_dense(net, x, y, hp))
        for a, b in zip(runs[0].layers, runs[1].layers):
            if isinstance(a, Dense):
                assert np.array_equal(a.weight, b.weight)
                assert np.array_equal(a.bias, b.bias)

    def test_conv_network_not_trainable(self, rng):
        net = Network(
            [Conv2d(rng.normal(size=(1, 1, 2, 2)), np.zeros(1)), Flatten(), Dense(np.eye(1), np.zeros(1)), Softmax()],
            (1, 2, 2),
        )
        with pytest.raises(TrainingError, match="conv2d"):
            train_dense(net, np.zeros((1, 1, 2, 2)), [0])

    def test_needs_head(self, rng):
        net = init_dense_network((2,), (), 2, None, rng)
        with pytest.raises(TrainingError, match="terminal"):
            train_dense(net, np.zeros((2, 2)), [0, 1])

    def test_label_range(self, rng):
        net = init_dense_network((2,), (), 2, "softmax", rng)
        with pytest.raises(TrainingError, match="labels must lie"):
            train_dense(net, np.zeros((2, 2)), [0, 2])

    def test_sigmoid_labels_binary(self, rng):
        net = init_dense_network((2,), (), 2, "sigmoid", rng)
        with pytest.raises(TrainingError, match="0 or 1"):
            train_dense(net, np.zeros((2, 2)), [[0.5, 1.0], [0.0, 1.0]])

    def test_sample_shape(self, rng):
        net = init_dense_network((2,), (), 2, "softmax", rng)
        with pytest.raises(TrainingError, match="does not match"):
            train_dense(net, np.zeros((2, 3)), [0, 1])

"""Seeded SGD trainer for dense networks with a softmax or sigmoid head."""
from __future__ import annotations

import logging
import math
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from nesyverify.nn.layers import Dense, Flatten, Layer, Relu, Sigmoid, Softmax, Tensor
from nesyverify.nn.network import Network
from nesyverify.utils.errors import TrainingError

logger = logging.getLogger(__name__)

_TRAINABLE_KINDS = (Dense, Relu, Flatten, Softmax, Sigmoid)


class TrainingParams(BaseModel):
    """Hyperparameters for train_dense."""

    model_config = ConfigDict(frozen=True)

    lr: float = Field(default=0.1, gt=0, description="SGD learning rate")
    epochs: int = Field(default=20, ge=1, le=10_000, description="Passes over the data")
    batch: int = Field(default=32, ge=1, description="Mini-batch size")
    seed: int = Field(default=0, description="Seed for initial shuffling order")


def init_dense_network(
    input_shape: Sequence[int],
    hidden: Sequence[int],
    outputs: int,
    head: Optional[str],
    rng: np.random.Generator,
) -> Network:
    """Dense ReLU network with He-uniform weights and zero biases.

    ``head`` is "softmax", "sigmoid" or None (raw logits). Inputs of rank
    above one are flattened first.
    """
    if head not in ("softmax", "sigmoid", None):
        raise ValueError(f"unknown head {head!r}; expected softmax, sigmoid or None")
    if outputs < 1 or any(h < 1 for h in hidden):
        raise ValueError("layer widths must be positive")
    input_shape = tuple(input_shape)
    layers: list[Layer] = []
    if len(input_shape) > 1:
        layers.append(Flatten())
    fan_in = int(np.prod(input_shape))
    for width in [*hidden, outputs]:
        limit = math.sqrt(6.0 / fan_in)
        layers.append(Dense(rng.uniform(-limit, limit, size=(width, fan_in)), np.zeros(width)))
        layers.append(Relu())
        fan_in = width
    layers.pop()
    if head == "softmax":
        layers.append(Softmax())
    elif head == "sigmoid":
        layers.append(Sigmoid())
    return Network(layers, input_shape)


def _check_trainable(net: Network) -> None:
    for k, layer in enumerate(net.layers):
        if not isinstance(layer, _TRAINABLE_KINDS):
            raise TrainingError(
                f"layer {k} ({layer.kind}) is not supported by the dense trainer; "
                "only dense, relu, flatten and a softmax/sigmoid head can be trained"
            )
    if net.head is None:
        raise TrainingError("training needs a terminal softmax or sigmoid layer")


def _targets(net: Network, labels, n: int) -> np.ndarray:
    k = net.output_size
    if net.head == "softmax":
        y = np.asarray(labels)
        if y.shape != (n,):
            raise TrainingError(f"expected {n} integer labels, got shape {y.shape}")
        y = y.astype(np.int64)
        if np.any(y < 0) or np.any(y >= k):
            raise TrainingError(f"labels must lie in [0, {k})")
        return np.eye(k)[y]
    y = np.asarray(labels, dtype=np.float64)
    if y.shape != (n, k):
        raise TrainingError(f"expected label matrix of shape ({n}, {k}), got {y.shape}")
    if np.any((y != 0.0) & (y != 1.0)):
        raise TrainingError("sigmoid labels must be 0 or 1")
    return y


def train_dense(
    net: Network,
    images: Sequence[Tensor],
    labels,
    hp: Optional[TrainingParams] = None,
) -> Network:
    """Train ``net`` by mini-batch SGD and return a new network.

    Softmax heads minimise cross-entropy against integer labels; sigmoid
    heads minimise binary cross-entropy against 0/1 label vectors. The
    result depends only on the inputs and ``hp.seed``.
    """
    hp = hp or TrainingParams()
    _check_trainable(net)
    x = np.asarray(images, dtype=np.float64)
    if x.ndim == 0 or len(x) == 0:
        raise TrainingError("training data is empty")
    if x.shape[1:] != net.input_shape:
        raise TrainingError(f"sample shape {x.shape[1:]} does not match network input {net.input_shape}")
    n = len(x)
    y = _targets(net, labels, n)

    params = {
        k: [layer.weight.copy(), layer.bias.copy()]
        for k, layer in enumerate(net.layers)
        if isinstance(layer, Dense)
    }
    body = net.layers[:-1]
    rng = np.random.default_rng(hp.seed)

    for epoch in range(hp.epochs):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, hp.batch):
            idx = order[start:start + hp.batch]
            a = x[idx]
            inputs = []
            for k, layer in enumerate(body):
                inputs.append(a)
                if isinstance(layer, Flatten):
                    a = a.reshape(len(a), -1)
                elif isinstance(layer, Dense):
                    w, b = params[k]
                    a = a @ w.T + b
                else:
                    a = np.maximum(a, 0.0)
            yb = y[idx]
            if net.head == "softmax":
                z = np.exp(a - a.max(axis=1, keepdims=True))
                p = z / z.sum(axis=1, keepdims=True)
                total += float(-np.sum(yb * np.log(np.clip(p, 1e-300, None))))
            else:
                p = np.exp(-np.logaddexp(0.0, -a))
                total += float(np.sum(yb * np.logaddexp(0.0, -a) + (1 - yb) * np.logaddexp(0.0, a)))
            g = (p - yb) / len(idx)
            for k in range(len(body) - 1, -1, -1):
                layer, inp = body[k], inputs[k]
                if isinstance(layer, Flatten):
                    g = g.reshape(inp.shape)
                elif isinstance(layer, Dense):
                    w, b = params[k]
                    grad_w = g.T @ inp
                    grad_b = g.sum(axis=0)
                    g = g @ w
                    w -= hp.lr * grad_w
                    b -= hp.lr * grad_b
                else:
                    g = g * (inp > 0.0)
        loss = total / n
        if not math.isfinite(loss):
            raise TrainingError(f"training diverged at epoch {epoch + 1}; lower the learning rate")
        logger.info(f"epoch {epoch + 1}/{hp.epochs}: loss {loss:.4f}")

    layers = [
        Dense(*params[k]) if isinstance(layer, Dense) else layer
        for k, layer in enumerate(net.layers)
    ]
    return Network(layers, net.input_shape)

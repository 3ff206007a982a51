"""Networks: an ordered layer list with a declared input shape."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from nesyverify.config import config
from nesyverify.nn.layers import TERMINAL_ACTIVATIONS, BoundedTensor, Layer, Tensor
from nesyverify.utils.errors import ShapeError


@dataclass(eq=False)
class Network:
    layers: list[Layer]
    input_shape: tuple[int, ...]
    shapes: list[tuple[int, ...]] = field(init=False, repr=False)

    def __post_init__(self):
        self.layers = list(self.layers)
        self.input_shape = tuple(int(d) for d in self.input_shape)
        if not self.input_shape or any(d < 1 for d in self.input_shape):
            raise ShapeError(f"invalid input shape {self.input_shape}")
        if len(self.input_shape) > 4:
            raise ShapeError(f"input rank {len(self.input_shape)} exceeds 4")
        shapes = [self.input_shape]
        for k, layer in enumerate(self.layers):
            try:
                shapes.append(layer.output_shape(shapes[-1]))
            except ShapeError as e:
                raise ShapeError(f"layer {k} ({layer.kind}): {e}") from None
        if len(shapes[-1]) != 1:
            raise ShapeError(f"network output must be a vector, got shape {shapes[-1]}")
        for k, layer in enumerate(self.layers):
            if isinstance(layer, TERMINAL_ACTIVATIONS) and k != len(self.layers) - 1:
                raise ShapeError(f"{layer.kind} is only supported as the final layer (found at {k})")
        self.shapes = shapes

    @property
    def output_size(self) -> int:
        return self.shapes[-1][0]

    @property
    def head(self) -> Optional[str]:
        """Kind of the terminal activation, or None for raw logits."""
        if self.layers and isinstance(self.layers[-1], TERMINAL_ACTIVATIONS):
            return self.layers[-1].kind
        return None


def _check_input(net: Network, shape: tuple[int, ...]) -> None:
    if tuple(shape) != net.input_shape:
        raise ShapeError(f"input shape {tuple(shape)} does not match network input {net.input_shape}")


def forward(net: Network, x: Tensor) -> Tensor:
    x = np.asarray(x, dtype=np.float64)
    _check_input(net, x.shape)
    if not np.all(np.isfinite(x)):
        raise ValueError("input contains non-finite values")
    for layer in net.layers:
        x = layer.forward(x)
    return x


def forward_ibp_trace(net: Network, bx: BoundedTensor) -> list[BoundedTensor]:
    """Bounds after every layer; element 0 is the input box."""
    _check_input(net, bx.shape)
    trace = [bx]
    for layer in net.layers:
        trace.append(layer.forward_ibp(trace[-1]))
    return trace


def forward_ibp(net: Network, bx: BoundedTensor) -> BoundedTensor:
    return forward_ibp_trace(net, bx)[-1]


def epsilon_ball(
    x: Tensor,
    eps: float,
    domain: Optional[tuple[float, float]] = None,
) -> BoundedTensor:
    """l-infinity ball of radius ``eps`` around ``x``, clamped to ``domain``."""
    if not eps >= 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    lo, hi = (config.input_lo, config.input_hi) if domain is None else domain
    if lo > hi:
        raise ValueError(f"empty input domain [{lo}, {hi}]")
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < lo) or np.any(x > hi):
        raise ValueError(f"input lies outside the domain [{lo}, {hi}]")
    return BoundedTensor(np.maximum(x - eps, lo), np.minimum(x + eps, hi))


def accuracy(net: Network, images: Sequence[Tensor], labels: Sequence) -> float:
    """Fraction of correct predictions.

    Softmax and logit heads compare argmax against integer labels; a
    sigmoid head thresholds each output at 0.5 and requires the whole
    label vector to match.
    """
    images = list(images)
    if not images:
        raise ValueError("accuracy needs at least one sample")
    correct = 0
    for x, y in zip(images, labels):
        out = forward(net, x)
        if net.head == "sigmoid":
            correct += bool(np.array_equal(out >= 0.5, np.asarray(y) >= 0.5))
        else:
            correct += int(np.argmax(out)) == int(y)
    return correct / len(images)

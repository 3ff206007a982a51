"""Layers with concrete and interval (IBP) forward passes.

Tensors are float64 numpy arrays for a single sample: vectors for dense
layers, (channels, height, width) for convolution and pooling.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from nesyverify.utils.errors import ShapeError

Tensor = np.ndarray


@dataclass(eq=False)
class BoundedTensor:
    """Element-wise lower/upper bounds of one tensor."""

    lower: Tensor
    upper: Tensor

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=np.float64)
        self.upper = np.asarray(self.upper, dtype=np.float64)
        if self.lower.shape != self.upper.shape:
            raise ShapeError(f"bound shapes differ: {self.lower.shape} vs {self.upper.shape}")
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")

    @classmethod
    def point(cls, x: Tensor) -> "BoundedTensor":
        x = np.asarray(x, dtype=np.float64)
        return cls(x.copy(), x.copy())

    @property
    def shape(self) -> tuple[int, ...]:
        return self.lower.shape

    @property
    def center(self) -> Tensor:
        return (self.lower + self.upper) / 2.0

    @property
    def radius(self) -> Tensor:
        return (self.upper - self.lower) / 2.0

    def contains(self, x: Tensor, tol: float = 0.0) -> bool:
        return bool(np.all(self.lower - tol <= x) and np.all(x <= self.upper + tol))

    def subset_of(self, other: "BoundedTensor", tol: float = 0.0) -> bool:
        return bool(np.all(other.lower - tol <= self.lower) and np.all(self.upper <= other.upper + tol))


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.flags.writeable = False
    return a


def softmax(x: Tensor) -> Tensor:
    z = np.exp(x - np.max(x))
    return z / z.sum()


def softmax_bounds(l: Tensor, u: Tensor) -> tuple[Tensor, Tensor]:
    """Per-class softmax bounds over the logit box [l, u].

    lower_i = 1 / (1 + sum_{j != i} exp(u_j - l_i)),
    upper_i = 1 / (1 + sum_{j != i} exp(l_j - u_i)),
    computed as exp(x_i - logsumexp(...)) for stability.
    """
    l = np.asarray(l, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    if l.shape != u.shape or l.ndim != 1:
        raise ShapeError(f"softmax bounds need equal-length vectors, got {l.shape} and {u.shape}")
    if np.any(l > u):
        raise ValueError("lower logits exceed upper logits")
    lower = np.empty_like(l)
    upper = np.empty_like(u)
    for i in range(l.size):
        worst = u.copy()
        worst[i] = l[i]
        lower[i] = np.exp(l[i] - np.logaddexp.reduce(worst))
        best = l.copy()
        best[i] = u[i]
        upper[i] = np.exp(u[i] - np.logaddexp.reduce(best))
    return lower, upper


def sigmoid(x: Tensor) -> Tensor:
    return np.exp(-np.logaddexp(0.0, -x))


class Layer(ABC):
    kind: ClassVar[str]
    trainable: ClassVar[bool] = False

    @abstractmethod
    def output_shape(self, in_shape: tuple[int, ...]) -> tuple[int, ...]:
        ...

    @abstractmethod
    def forward(self, x: Tensor) -> Tensor:
        ...

    @abstractmethod
    def forward_ibp(self, b: BoundedTensor) -> BoundedTensor:
        ...


@dataclass(eq=False)
class Dense(Layer):
    weight: np.ndarray  # (out, in)
    bias: np.ndarray  # (out,)
    kind: ClassVar[str] = "dense"
    trainable: ClassVar[bool] = True

    def __post_init__(self):
        self.weight = _frozen(self.weight)
        self.bias = _frozen(self.bias)
        if self.weight.ndim != 2 or self.bias.shape != (self.weight.shape[0],):
            raise ShapeError(
                f"dense weight {self.weight.shape} and bias {self.bias.shape} are inconsistent"
            )

    def output_shape(self, in_shape):
        if in_shape != (self.weight.shape[1],):
            raise ShapeError(f"dense layer expects input ({self.weight.shape[1]},), got {in_shape}")
        return (self.weight.shape[0],)

    def forward(self, x):
        return self.weight @ x + self.bias

    def forward_ibp(self, b):
        mu = self.weight @ b.center + self.bias
        r = np.abs(self.weight) @ b.radius
        return BoundedTensor(mu - r, mu + r)


def _windows(x: Tensor, kh: int, kw: int, stride: int) -> Tensor:
    """(C, H, W) -> (C, Ho, Wo, kh, kw) strided windows."""
    return sliding_window_view(x, (kh, kw), axis=(1, 2))[:, ::stride, ::stride]


@dataclass(eq=False)
class Conv2d(Layer):
    weight: np.ndarray  # (out_c, in_c, kh, kw)
    bias: np.ndarray  # (out_c,)
    stride: int = 1
    padding: int = 0
    kind: ClassVar[str] = "conv2d"

    def __post_init__(self):
        self.weight = _frozen(self.weight)
        self.bias = _frozen(self.bias)
        if self.weight.ndim != 4 or self.bias.shape != (self.weight.shape[0],):
            raise ShapeError(
                f"conv weight {self.weight.shape} and bias {self.bias.shape} are inconsistent"
            )
        if self.stride < 1 or self.padding < 0:
            raise ShapeError(f"invalid stride {self.stride} or padding {self.padding}")

    def output_shape(self, in_shape):
        oc, ic, kh, kw = self.weight.shape
        if len(in_shape) != 3 or in_shape[0] != ic:
            raise ShapeError(f"conv layer expects ({ic}, H, W) input, got {in_shape}")
        h = (in_shape[1] + 2 * self.padding - kh) // self.stride + 1
        w = (in_shape[2] + 2 * self.padding - kw) // self.stride + 1
        if h < 1 or w < 1:
            raise ShapeError(f"conv kernel {kh}x{kw} does not fit input {in_shape}")
        return (oc, h, w)

    def _conv(self, x: Tensor, weight: Tensor) -> Tensor:
        p = self.padding
        if p:
            x = np.pad(x, ((0, 0), (p, p), (p, p)))
        _, _, kh, kw = weight.shape
        return np.einsum("chwij,ocij->ohw", _windows(x, kh, kw, self.stride), weight)

    def forward(self, x):
        return self._conv(x, self.weight) + self.bias[:, None, None]

    def forward_ibp(self, b):
        mu = self._conv(b.center, self.weight) + self.bias[:, None, None]
        r = self._conv(b.radius, np.abs(self.weight))
        return BoundedTensor(mu - r, mu + r)


@dataclass(eq=False)
class MaxPool2d(Layer):
    kh: int
    kw: int
    stride: int
    kind: ClassVar[str] = "maxpool2d"

    def output_shape(self, in_shape):
        if len(in_shape) != 3:
            raise ShapeError(f"max-pool expects (C, H, W) input, got {in_shape}")
        h = (in_shape[1] - self.kh) // self.stride + 1
        w = (in_shape[2] - self.kw) // self.stride + 1
        if h < 1 or w < 1:
            raise ShapeError(f"pool window {self.kh}x{self.kw} does not fit input {in_shape}")
        return (in_shape[0], h, w)

    def forward(self, x):
        return _windows(x, self.kh, self.kw, self.stride).max(axis=(3, 4))

    def forward_ibp(self, b):
        return BoundedTensor(self.forward(b.lower), self.forward(b.upper))


@dataclass(eq=False)
class Relu(Layer):
    kind: ClassVar[str] = "relu"

    def output_shape(self, in_shape):
        return in_shape

    def forward(self, x):
        return np.maximum(x, 0.0)

    def forward_ibp(self, b):
        return BoundedTensor(self.forward(b.lower), self.forward(b.upper))


@dataclass(eq=False)
class Sigmoid(Layer):
    kind: ClassVar[str] = "sigmoid"

    def output_shape(self, in_shape):
        return in_shape

    def forward(self, x):
        return sigmoid(x)

    def forward_ibp(self, b):
        return BoundedTensor(sigmoid(b.lower), sigmoid(b.upper))


@dataclass(eq=False)
class Softmax(Layer):
    kind: ClassVar[str] = "softmax"

    def output_shape(self, in_shape):
        if len(in_shape) != 1:
            raise ShapeError(f"softmax expects a vector input, got {in_shape}")
        return in_shape

    def forward(self, x):
        return softmax(x)

    def forward_ibp(self, b):
        return BoundedTensor(*softmax_bounds(b.lower, b.upper))


@dataclass(eq=False)
class Flatten(Layer):
    kind: ClassVar[str] = "flatten"

    def output_shape(self, in_shape):
        return (int(np.prod(in_shape)),)

    def forward(self, x):
        return x.reshape(-1)

    def forward_ibp(self, b):
        return BoundedTensor(b.lower.reshape(-1), b.upper.reshape(-1))


TERMINAL_ACTIVATIONS = (Softmax, Sigmoid)

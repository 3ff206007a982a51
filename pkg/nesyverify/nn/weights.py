"""Weight file persistence.

A weight file is one JSON document tagged ``nesy-weights/1``: the input
shape and, per layer, its kind, hyperparameters, and parameter arrays
stored flat in row-major order next to their declared shapes. Floats are
written with Python's shortest round-trip repr, so load(save(net)) is
exact.
"""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from nesyverify.nn.layers import (
    Conv2d,
    Dense,
    Flatten,
    Layer,
    MaxPool2d,
    Relu,
    Sigmoid,
    Softmax,
)
from nesyverify.nn.network import Network
from nesyverify.utils.errors import ShapeError, WeightFileError

logger = logging.getLogger(__name__)

WEIGHTS_FORMAT = "nesy-weights/1"

FiniteFloat = Annotated[float, Field(allow_inf_nan=False)]


class ArraySpec(BaseModel):
    shape: list[int] = Field(..., min_length=1)
    data: list[FiniteFloat]

    @model_validator(mode="after")
    def _length_matches_shape(self):
        expected = int(np.prod(self.shape))
        if any(d < 0 for d in self.shape) or expected != len(self.data):
            raise ValueError(
                f"declared shape {self.shape} needs {expected} values, found {len(self.data)}"
            )
        return self

    @classmethod
    def of(cls, a: np.ndarray) -> "ArraySpec":
        return cls(shape=list(a.shape), data=a.reshape(-1).tolist())

    def to_array(self) -> np.ndarray:
        return np.array(self.data, dtype=np.float64).reshape(self.shape)


class LayerSpec(BaseModel):
    kind: Literal["dense", "conv2d", "maxpool2d", "relu", "sigmoid", "softmax", "flatten"]
    weight: Optional[ArraySpec] = None
    bias: Optional[ArraySpec] = None
    stride: Optional[int] = Field(default=None, ge=1)
    padding: Optional[int] = Field(default=None, ge=0)
    kernel: Optional[list[int]] = Field(default=None, min_length=2, max_length=2)

    @model_validator(mode="after")
    def _required_fields(self):
        if self.kind in ("dense", "conv2d") and (self.weight is None or self.bias is None):
            raise ValueError(f"{self.kind} layer needs weight and bias")
        if self.kind == "maxpool2d" and (self.kernel is None or self.stride is None):
            raise ValueError("maxpool2d layer needs kernel and stride")
        return self


class WeightFile(BaseModel):
    format: Literal["nesy-weights/1"] = WEIGHTS_FORMAT
    input_shape: list[int] = Field(..., min_length=1, max_length=4)
    layers: list[LayerSpec]


def _layer_spec(layer: Layer) -> LayerSpec:
    if isinstance(layer, Dense):
        return LayerSpec(kind="dense", weight=ArraySpec.of(layer.weight), bias=ArraySpec.of(layer.bias))
    if isinstance(layer, Conv2d):
        return LayerSpec(
            kind="conv2d",
            weight=ArraySpec.of(layer.weight),
            bias=ArraySpec.of(layer.bias),
            stride=layer.stride,
            padding=layer.padding,
        )
    if isinstance(layer, MaxPool2d):
        return LayerSpec(kind="maxpool2d", kernel=[layer.kh, layer.kw], stride=layer.stride)
    return LayerSpec(kind=layer.kind)


def _layer(spec: LayerSpec) -> Layer:
    if spec.kind == "dense":
        return Dense(spec.weight.to_array(), spec.bias.to_array())
    if spec.kind == "conv2d":
        return Conv2d(
            spec.weight.to_array(),
            spec.bias.to_array(),
            stride=spec.stride or 1,
            padding=spec.padding or 0,
        )
    if spec.kind == "maxpool2d":
        return MaxPool2d(spec.kernel[0], spec.kernel[1], spec.stride)
    return {"relu": Relu, "sigmoid": Sigmoid, "softmax": Softmax, "flatten": Flatten}[spec.kind]()


def dumps_weights(net: Network) -> str:
    doc = WeightFile(input_shape=list(net.input_shape), layers=[_layer_spec(l) for l in net.layers])
    return json.dumps(doc.model_dump(exclude_none=True), indent=1)


def loads_weights(text: Union[str, bytes]) -> Network:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise WeightFileError("weight file is not UTF-8", offset=e.start) from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        # pos counts characters; report bytes
        offset = len(text[: e.pos].encode("utf-8"))
        raise WeightFileError(f"malformed weight file: {e.msg}", offset=offset) from None
    try:
        doc = WeightFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "document"
        raise WeightFileError(f"invalid weight file at {where}: {first['msg']}") from None
    try:
        return Network([_layer(s) for s in doc.layers], tuple(doc.input_shape))
    except ShapeError as e:
        raise WeightFileError(f"inconsistent weight file: {e}") from None


def save_weights(net: Network, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_weights(net), encoding="utf-8")
    logger.info(f"Wrote {len(net.layers)}-layer network to {path}")


def load_weights(path: Union[str, Path]) -> Network:
    return loads_weights(Path(path).read_bytes())

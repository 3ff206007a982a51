"""Verification datasets: one array per system input plus optional labels."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from nesyverify.utils.errors import QueryError, ShapeError

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class Dataset:
    """``inputs[i][n]`` is input ``i`` of sample ``n``; ``labels[n]`` its label."""

    inputs: tuple[np.ndarray, ...]
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        self.inputs = tuple(np.asarray(a, dtype=np.float64) for a in self.inputs)
        if not self.inputs:
            raise ShapeError("dataset has no inputs")
        sizes = {len(a) for a in self.inputs}
        if len(sizes) != 1:
            raise ShapeError(f"inputs disagree on the sample count: {sorted(sizes)}")
        if self.labels is not None:
            self.labels = np.asarray(self.labels)
            if len(self.labels) != len(self):
                raise ShapeError(f"{len(self.labels)} labels for {len(self)} samples")

    def __len__(self) -> int:
        return len(self.inputs[0])

    def sample(self, n: int) -> list[np.ndarray]:
        return [a[n] for a in self.inputs]

    def label(self, n: int) -> int:
        if self.labels is None:
            raise QueryError("dataset has no labels; argmax verification needs the correct output")
        return int(self.labels[n])


def group_tuples(images: np.ndarray, labels: np.ndarray, k: int) -> Dataset:
    """Group consecutive images into k-tuples labelled by their digit sum.

    Trailing images that do not fill a tuple are dropped.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    groups = len(images) // k
    if groups == 0:
        raise ShapeError(f"{len(images)} images cannot form a single {k}-tuple")
    used = groups * k
    inputs = tuple(images[j:used:k] for j in range(k))
    sums = np.asarray(labels[:used]).reshape(groups, k).sum(axis=1)
    return Dataset(inputs, sums)


def load_dataset_npz(path: Union[str, Path], input_names: Sequence[str]) -> Dataset:
    """Arrays named after the system inputs, plus an optional ``labels`` array."""
    with np.load(path) as npz:
        missing = [name for name in input_names if name not in npz.files]
        if missing:
            raise ShapeError(f"dataset {path} lacks arrays for inputs {missing} (has {npz.files})")
        inputs = tuple(npz[name] for name in input_names)
        labels = npz["labels"] if "labels" in npz.files else None
    ds = Dataset(inputs, labels)
    logger.info(f"Loaded {len(ds)} samples from {path}")
    return ds


def save_dataset_npz(path: Union[str, Path], ds: Dataset, input_names: Sequence[str]) -> None:
    if len(input_names) != len(ds.inputs):
        raise ShapeError(f"{len(input_names)} names for {len(ds.inputs)} inputs")
    arrays = dict(zip(input_names, ds.inputs))
    if ds.labels is not None:
        arrays["labels"] = ds.labels
    np.savez(path, **arrays)

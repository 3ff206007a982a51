"""IDX image/label files (the MNIST distribution format).

Images: big-endian header ``0x00000803, count, rows, cols`` followed by
unsigned-byte pixels. Labels: ``0x00000801, count`` followed by one
unsigned byte per label. Files ending in ``.gz`` are read through gzip.
"""
import gzip
import logging
import struct
from pathlib import Path
from typing import Union

import numpy as np

from nesyverify.utils.errors import IdxFormatError

logger = logging.getLogger(__name__)

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801

PathLike = Union[str, Path]


def _read_bytes(path: PathLike) -> bytes:
    path = Path(path)
    if path.suffix == ".gz":
        with gzip.open(path, "rb") as fh:
            return fh.read()
    return path.read_bytes()


def _write_bytes(path: PathLike, payload: bytes) -> None:
    path = Path(path)
    if path.suffix == ".gz":
        with gzip.open(path, "wb") as fh:
            fh.write(payload)
    else:
        path.write_bytes(payload)


def parse_idx_images(raw: bytes, name: str = "images") -> np.ndarray:
    if len(raw) < 16:
        raise IdxFormatError(f"{name}: truncated header ({len(raw)} bytes)")
    magic, count, rows, cols = struct.unpack(">IIII", raw[:16])
    if magic != IMAGES_MAGIC:
        raise IdxFormatError(f"{name}: not an IDX image file (magic 0x{magic:08x})")
    expected = count * rows * cols
    payload = raw[16:]
    if len(payload) < expected:
        raise IdxFormatError(
            f"{name}: truncated payload, expected {expected} pixel bytes, found {len(payload)}"
        )
    if len(payload) > expected:
        logger.warning(f"{name}: ignoring {len(payload) - expected} trailing bytes after {count} images")
    pixels = np.frombuffer(payload, dtype=np.uint8, count=expected)
    return pixels.reshape(count, rows, cols).astype(np.float64) / 255.0


def parse_idx_labels(raw: bytes, name: str = "labels") -> np.ndarray:
    if len(raw) < 8:
        raise IdxFormatError(f"{name}: truncated header ({len(raw)} bytes)")
    magic, count = struct.unpack(">II", raw[:8])
    if magic != LABELS_MAGIC:
        raise IdxFormatError(f"{name}: not an IDX label file (magic 0x{magic:08x})")
    payload = raw[8:]
    if len(payload) < count:
        raise IdxFormatError(f"{name}: truncated payload, expected {count} labels, found {len(payload)}")
    if len(payload) > count:
        logger.warning(f"{name}: ignoring {len(payload) - count} trailing bytes after {count} labels")
    return np.frombuffer(payload, dtype=np.uint8, count=count).astype(np.int64)


def read_idx(images_path: PathLike, labels_path: PathLike) -> tuple[np.ndarray, np.ndarray]:
    """Read an image/label pair; pixels are scaled to [0, 1]."""
    images = parse_idx_images(_read_bytes(images_path), str(images_path))
    labels = parse_idx_labels(_read_bytes(labels_path), str(labels_path))
    if len(images) != len(labels):
        raise IdxFormatError(
            f"count mismatch: {len(images)} images in {images_path}, {len(labels)} labels in {labels_path}"
        )
    logger.info(f"Loaded {len(images)} images of {images.shape[1]}x{images.shape[2]} from {images_path}")
    return images, labels


def write_idx(
    images_path: PathLike,
    labels_path: PathLike,
    images: np.ndarray,
    labels: np.ndarray,
) -> None:
    """Write [0, 1] images of shape (N, rows, cols) and integer labels."""
    images = np.asarray(images, dtype=np.float64)
    labels = np.asarray(labels)
    if images.ndim != 3 or labels.shape != (len(images),):
        raise ValueError(f"expected (N, rows, cols) images and N labels, got {images.shape} and {labels.shape}")
    if np.any(images < 0.0) or np.any(images > 1.0):
        raise ValueError("image values must lie in [0, 1]")
    if np.any(labels < 0) or np.any(labels > 255):
        raise ValueError("labels must fit in one byte")
    n, rows, cols = images.shape
    pixels = np.rint(images * 255.0).astype(np.uint8)
    _write_bytes(images_path, struct.pack(">IIII", IMAGES_MAGIC, n, rows, cols) + pixels.tobytes())
    _write_bytes(labels_path, struct.pack(">II", LABELS_MAGIC, n) + labels.astype(np.uint8).tobytes())

"""Seeded synthetic fixtures standing in for MNIST and dashcam frames.

Digits are seven-segment glyphs on a 28x28 canvas with random shifts,
stroke intensity and Gaussian noise. Frames are 3x16x16 RGB scenes that
may contain a red light (top right) and a car (bottom centre); their
labels satisfy the driving constraints: brake iff red light or car,
accelerate iff not brake.
"""
import numpy as np

DIGIT_SIZE = 28
FRAME_SHAPE = (3, 16, 16)

# (row0, row1, col0, col1), inclusive-exclusive
_SEGMENTS = {
    "a": (4, 6, 8, 20),
    "b": (4, 15, 18, 20),
    "c": (13, 24, 18, 20),
    "d": (22, 24, 8, 20),
    "e": (13, 24, 8, 10),
    "f": (4, 15, 8, 10),
    "g": (13, 15, 8, 20),
}

_GLYPHS = {
    0: "abcdef",
    1: "bc",
    2: "abged",
    3: "abgcd",
    4: "fgbc",
    5: "afgcd",
    6: "afgedc",
    7: "abc",
    8: "abcdefg",
    9: "abcdfg",
}


def digit_glyph(digit: int) -> np.ndarray:
    """Noise-free, centred 28x28 glyph with unit stroke intensity."""
    if digit not in _GLYPHS:
        raise ValueError(f"digit must be in 0..9, got {digit}")
    img = np.zeros((DIGIT_SIZE, DIGIT_SIZE))
    for seg in _GLYPHS[digit]:
        r0, r1, c0, c1 = _SEGMENTS[seg]
        img[r0:r1, c0:c1] = 1.0
    return img


def synthetic_digits(
    n: int,
    rng: np.random.Generator,
    jitter: int = 2,
    noise: float = 0.05,
    num_classes: int = 10,
) -> tuple[np.ndarray, np.ndarray]:
    """``n`` digit images in [0, 1] with labels drawn uniformly from 0..num_classes-1."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 2 <= num_classes <= 10:
        raise ValueError(f"num_classes must be in 2..10, got {num_classes}")
    if not 0 <= jitter <= 3:
        raise ValueError(f"jitter must be in 0..3, got {jitter}")
    labels = rng.integers(0, num_classes, size=n)
    shifts = rng.integers(-jitter, jitter + 1, size=(n, 2))
    strength = rng.uniform(0.7, 1.0, size=n)
    images = np.empty((n, DIGIT_SIZE, DIGIT_SIZE))
    for i in range(n):
        glyph = np.roll(digit_glyph(int(labels[i])), tuple(shifts[i]), axis=(0, 1))
        images[i] = glyph * strength[i]
    if noise > 0:
        images += rng.normal(0.0, noise, size=images.shape)
    return np.clip(images, 0.0, 1.0), labels.astype(np.int64)


def synthetic_frames(
    n: int,
    rng: np.random.Generator,
    noise: float = 0.05,
) -> tuple[np.ndarray, np.ndarray]:
    """``n`` frames and a (n, 4) 0/1 label matrix.

    Label columns: red_light, car_in_front, brake, accelerate.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    frames = np.empty((n,) + FRAME_SHAPE)
    labels = np.zeros((n, 4))
    for i in range(n):
        frame = np.full(FRAME_SHAPE, rng.uniform(0.3, 0.5))
        red = rng.random() < 0.5
        car = rng.random() < 0.5
        if red:
            frame[:, 1:5, 11:15] = np.array([0.95, 0.1, 0.1])[:, None, None]
        if car:
            frame[:, 9:15, 5:11] = 0.05
        frames[i] = frame
        brake = red or car
        labels[i] = (red, car, brake, not brake)
    if noise > 0:
        frames += rng.normal(0.0, noise, size=frames.shape)
    return np.clip(frames, 0.0, 1.0), labels

"""Seeded training of the benchmark networks on synthetic fixtures."""
from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np

from nesyverify.data.synthetic import FRAME_SHAPE, synthetic_digits, synthetic_frames
from nesyverify.nn.network import Network, accuracy
from nesyverify.nn.train import TrainingParams, init_dense_network, train_dense

logger = logging.getLogger(__name__)

DIGIT_HIDDEN = (64,)
FRAME_HIDDEN = (32,)


def train_digit_network(
    num_classes: int = 10,
    seed: int = 0,
    samples: int = 2000,
    hp: Optional[TrainingParams] = None,
    hidden: Sequence[int] = DIGIT_HIDDEN,
    images: Optional[np.ndarray] = None,
    labels: Optional[np.ndarray] = None,
) -> Network:
    """Dense softmax digit classifier; synthetic digits unless ``images`` are given."""
    rng = np.random.default_rng(seed)
    if images is None:
        images, labels = synthetic_digits(samples, rng, num_classes=num_classes)
    net = init_dense_network(images.shape[1:], hidden, num_classes, "softmax", rng)
    net = train_dense(net, images, labels, hp or TrainingParams(lr=0.1, epochs=15, batch=32, seed=seed))
    logger.info(f"Digit network trained: accuracy {accuracy(net, images, labels):.3f} on {len(images)} samples")
    return net


def train_driving_networks(
    seed: int = 0,
    samples: int = 1000,
    hp: Optional[TrainingParams] = None,
) -> tuple[Network, Network]:
    """(detector, action) sigmoid heads over synthetic frames.

    The detector predicts (red_light, car_in_front), the action head
    (brake, accelerate).
    """
    rng = np.random.default_rng(seed)
    frames, labels = synthetic_frames(samples, rng)
    hp = hp or TrainingParams(lr=0.2, epochs=15, batch=32, seed=seed)
    detector = init_dense_network(FRAME_SHAPE, FRAME_HIDDEN, 2, "sigmoid", rng)
    action = init_dense_network(FRAME_SHAPE, FRAME_HIDDEN, 2, "sigmoid", rng)
    detector = train_dense(detector, frames, labels[:, :2], hp)
    action = train_dense(action, frames, labels[:, 2:], hp)
    logger.info(
        f"Driving networks trained: detector {accuracy(detector, frames, labels[:, :2]):.3f}, "
        f"action {accuracy(action, frames, labels[:, 2:]):.3f}"
    )
    return detector, action

"""Shared test fixtures for the NeSy verifier tests."""
import numpy as np
import pytest

from nesyverify.config import config
from nesyverify.logic import VariablePool, parse_formula

DRIVING_TEXT = "((r | c) -> b) & (a <-> !b)"


@pytest.fixture
def pool():
    return VariablePool()


@pytest.fixture
def driving(pool):
    """Red-light constraint pair over r, c, b, a (pool indices 0..3)."""
    return parse_formula(DRIVING_TEXT, pool), pool


@pytest.fixture
def driving_weights(driving):
    _, pool = driving
    p = {"a": 0.3, "b": 0.7, "r": 0.6, "c": 0.8}
    return {pool[name]: value for name, value in p.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def restore_config():
    """Undo any assignment a test makes to ``config`` fields."""
    saved = dict(vars(config))
    yield config
    for key, value in saved.items():
        setattr(config, key, value)


@pytest.fixture(scope="session")
def digit_net():
    """Four-class digit classifier trained once per session on synthetic glyphs."""
    from nesyverify.bench.training import train_digit_network
    from nesyverify.nn.train import TrainingParams

    return train_digit_network(
        num_classes=4,
        seed=0,
        samples=600,
        hp=TrainingParams(lr=0.1, epochs=10, batch=32, seed=0),
        hidden=(32,),
    )

"""Unit tests for environment-driven configuration."""
import os
from unittest.mock import patch

import pytest

from nesyverify.circuit import vertex_bounds
from nesyverify.compiler import compile_to_circuit
from nesyverify.config import VerifierConfig
from nesyverify.intervals import Interval
from nesyverify.logic import parse_formula
from nesyverify.utils.errors import EnumerationGuardError

NESY_ENV = (
    "NESY_BRUTE_MAX_VARS",
    "NESY_EMAJSAT_MAX_VARS",
    "NESY_COMPILE_MAX_VARS",
    "NESY_SUM_MAX_DIGITS",
    "NESY_VERTEX_MAX_LEAVES",
    "NESY_VERTEX_CHUNK",
    "NESY_INPUT_LO",
    "NESY_INPUT_HI",
    "NESY_THREADS",
    "NESY_TIMEOUT_S",
    "APP_PORT",
    "NESY_LOG_LEVEL",
)


def _clean_env(**overrides):
    env = {k: v for k, v in os.environ.items() if k not in NESY_ENV}
    env.update(overrides)
    return env


class TestVerifierConfig:
    def test_defaults(self):
        with patch.dict(os.environ, _clean_env(), clear=True):
            cfg = VerifierConfig()
        assert cfg.brute_max_vars == 24
        assert cfg.emajsat_max_vars == 20
        assert cfg.compile_max_vars == 30
        assert cfg.sum_max_digits == 8
        assert cfg.vertex_max_leaves == 20
        assert cfg.vertex_chunk == 65536
        assert (cfg.input_lo, cfg.input_hi) == (0.0, 1.0)
        assert cfg.threads == 1
        assert cfg.timeout_s == 60.0
        assert cfg.app_port == 8000
        assert cfg.log_level == "INFO"

    def test_env_overrides(self):
        env = _clean_env(NESY_THREADS="4", NESY_VERTEX_MAX_LEAVES="12", NESY_LOG_LEVEL="debug")
        with patch.dict(os.environ, env, clear=True):
            cfg = VerifierConfig()
        assert cfg.threads == 4
        assert cfg.vertex_max_leaves == 12
        assert cfg.log_level == "DEBUG"

    def test_bad_integer(self):
        with patch.dict(os.environ, _clean_env(NESY_THREADS="many"), clear=True):
            with pytest.raises(ValueError):
                VerifierConfig()

    def test_guard_read_at_call_time(self, restore_config):
        circuit = compile_to_circuit(parse_formula("a & b & c"))
        box = [Interval(0.2, 0.8)] * 3
        restore_config.vertex_max_leaves = 2
        with pytest.raises(EnumerationGuardError):
            vertex_bounds(circuit, box)
        restore_config.vertex_max_leaves = 3
        assert len(vertex_bounds(circuit, box)) == 1

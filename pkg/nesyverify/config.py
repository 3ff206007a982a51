"""Configuration for the NeSy verifier.

Enumeration guards, worker pool size and server settings, loaded from
environment variables. Guards are read at call time, so assigning to a
field of ``config`` takes effect immediately.
"""
import os
from dataclasses import dataclass, field


@dataclass
class VerifierConfig:
    """Verifier configuration loaded from environment variables."""

    # Brute-force oracles
    brute_max_vars: int = field(
        default_factory=lambda: int(os.environ.get("NESY_BRUTE_MAX_VARS", "24"))
    )
    emajsat_max_vars: int = field(
        default_factory=lambda: int(os.environ.get("NESY_EMAJSAT_MAX_VARS", "20"))
    )

    # Knowledge compilation
    compile_max_vars: int = field(
        default_factory=lambda: int(os.environ.get("NESY_COMPILE_MAX_VARS", "30"))
    )
    sum_max_digits: int = field(
        default_factory=lambda: int(os.environ.get("NESY_SUM_MAX_DIGITS", "8"))
    )

    # Exact symbolic bounds (vertex enumeration)
    vertex_max_leaves: int = field(
        default_factory=lambda: int(os.environ.get("NESY_VERTEX_MAX_LEAVES", "20"))
    )
    vertex_chunk: int = field(
        default_factory=lambda: int(os.environ.get("NESY_VERTEX_CHUNK", "65536"))
    )

    # Input domain clamp for image-valued inputs
    input_lo: float = field(
        default_factory=lambda: float(os.environ.get("NESY_INPUT_LO", "0.0"))
    )
    input_hi: float = field(
        default_factory=lambda: float(os.environ.get("NESY_INPUT_HI", "1.0"))
    )

    # Experiment runner
    threads: int = field(
        default_factory=lambda: int(os.environ.get("NESY_THREADS", "1"))
    )
    timeout_s: float = field(
        default_factory=lambda: float(os.environ.get("NESY_TIMEOUT_S", "60"))
    )

    # Server
    app_port: int = field(
        default_factory=lambda: int(os.environ.get("APP_PORT", "8000"))
    )
    log_level: str = field(
        default_factory=lambda: os.environ.get("NESY_LOG_LEVEL", "INFO").upper()
    )


config = VerifierConfig()

"""Driving benchmark: does P(constraints) stay above a threshold under perturbation?"""
from __future__ import annotations

import csv
import io
import logging
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel

from nesyverify.data.synthetic import synthetic_frames
from nesyverify.nn.network import Network
from nesyverify.verifier.dataset import Dataset
from nesyverify.verifier.report import VerificationReport
from nesyverify.verifier.system import build_driving_system
from nesyverify.verifier.verify import Threshold, verify_dataset

logger = logging.getLogger(__name__)

DEFAULT_EPS_GRID = (1e-5, 5e-5, 1e-4, 5e-4, 1e-3)


class DrivingRow(BaseModel):
    eps: float
    robustness_pct: float
    mean_lower: Optional[float]
    mean_runtime_s: float


def frames_dataset(samples: int, seed: int) -> Dataset:
    frames, labels = synthetic_frames(samples, np.random.default_rng(seed))
    return Dataset((frames,), labels)


def bench_driving(
    detector: Network,
    action: Network,
    seed: int,
    samples: int = 50,
    eps_list: Sequence[float] = DEFAULT_EPS_GRID,
    threshold: float = 0.5,
    threads: Optional[int] = None,
) -> tuple[list[DrivingRow], list[VerificationReport]]:
    """Threshold-mode verification of P(constraints) >= ``threshold`` per eps."""
    sys = build_driving_system(detector, action)
    ds = frames_dataset(samples, seed)
    mode = Threshold(output=0, threshold=threshold)
    rows, reports = [], []
    for eps in eps_list:
        report = verify_dataset(sys, ds, eps, mode=mode, threads=threads)
        rows.append(
            DrivingRow(
                eps=eps,
                robustness_pct=100.0 * report.robustness,
                mean_lower=report.mean_lower,
                mean_runtime_s=report.mean_runtime_s,
            )
        )
        reports.append(report)
    return rows, reports


def driving_csv(rows: Sequence[DrivingRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("eps", "robustness_pct", "mean_lower", "mean_runtime_s"))
    for r in rows:
        writer.writerow(
            [
                repr(r.eps),
                f"{r.robustness_pct:.2f}",
                "" if r.mean_lower is None else f"{r.mean_lower:.12g}",
                f"{r.mean_runtime_s:.6f}",
            ]
        )
    return buf.getvalue()

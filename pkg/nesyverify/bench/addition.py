"""Multi-digit addition benchmark: relaxed vs exact circuit bounds.

Every (digit count, eps, method) cell verifies the same seeded samples in
sequence. A cell stops early once its wall-clock budget is spent; the exact
method is skipped when the circuit has more free leaves than the vertex
guard allows. Both cases are marked in the table rather than raised.
"""
from __future__ import annotations

import csv
import io
import logging
import math
import time
from typing import Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from nesyverify.config import config
from nesyverify.data.synthetic import synthetic_digits
from nesyverify.nn.network import Network
from nesyverify.utils.errors import EnumerationGuardError
from nesyverify.verifier.dataset import Dataset, group_tuples
from nesyverify.verifier.system import build_sum_system
from nesyverify.verifier.verify import (
    Argmax,
    VerificationQuery,
    verify_sample,
    verify_sample_exact_symbolic,
)

logger = logging.getLogger(__name__)

CellStatus = Literal["ok", "timeout", "guard"]

BENCH_COLUMNS = (
    "digits",
    "eps",
    "method",
    "status",
    "completed",
    "samples",
    "mean_runtime_s",
    "robustness_pct",
    "mean_lower",
    "mean_upper",
)


class BenchRow(BaseModel):
    digits: int
    eps: float
    method: Literal["relaxed", "exact"]
    status: CellStatus
    samples: int
    completed: int
    mean_runtime_s: Optional[float] = None
    robustness_pct: Optional[float] = None
    mean_lower: Optional[float] = None
    mean_upper: Optional[float] = None

    @property
    def mean_width(self) -> Optional[float]:
        if self.mean_lower is None or self.mean_upper is None:
            return None
        return self.mean_upper - self.mean_lower


def addition_dataset(num_digits: int, samples: int, num_classes: int, seed: int) -> Dataset:
    rng = np.random.default_rng(seed)
    images, labels = synthetic_digits(samples * num_digits, rng, num_classes=num_classes)
    return group_tuples(images, labels, num_digits)


def max_exact_digits(num_classes: int, max_leaves: Optional[int] = None) -> int:
    """Largest digit count whose sum circuit the vertex guard still admits.

    Every digit contributes one leaf per class, and at eps > 0 none of them
    is a point interval.
    """
    limit = config.vertex_max_leaves if max_leaves is None else max_leaves
    return limit // num_classes


def run_cell(
    sys,
    ds: Dataset,
    num_digits: int,
    eps: float,
    method: Literal["relaxed", "exact"],
    timeout_s: float,
    max_leaves: Optional[int] = None,
) -> BenchRow:
    runtimes: list[float] = []
    lowers: list[float] = []
    uppers: list[float] = []
    robust = 0
    status: CellStatus = "ok"
    started = time.perf_counter()
    for n in range(len(ds)):
        if time.perf_counter() - started > timeout_s:
            status = "timeout"
            break
        query = VerificationQuery(Argmax(ds.label(n)), eps, tuple(ds.sample(n)), sample_id=n)
        try:
            if method == "exact":
                result = verify_sample_exact_symbolic(sys, query, max_leaves=max_leaves)
            else:
                result = verify_sample(sys, query)
        except EnumerationGuardError as e:
            logger.warning(f"digits={num_digits} eps={eps:g} exact: {e}")
            status = "guard"
            break
        runtimes.append(result.runtime_s)
        lowers.append(result.lower_correct)
        uppers.append(result.upper_correct)
        robust += result.status == "robust"
    if status == "timeout":
        logger.warning(
            f"digits={num_digits} eps={eps:g} {method}: timed out after {len(runtimes)}/{len(ds)} samples"
        )
    done = len(runtimes)
    return BenchRow(
        digits=num_digits,
        eps=eps,
        method=method,
        status=status,
        samples=len(ds),
        completed=done,
        mean_runtime_s=math.fsum(runtimes) / done if done else None,
        robustness_pct=100.0 * robust / done if done else None,
        mean_lower=math.fsum(lowers) / done if done else None,
        mean_upper=math.fsum(uppers) / done if done else None,
    )


def bench_addition(
    digit_net: Network,
    digits: Sequence[int],
    eps_list: Sequence[float],
    seed: int,
    samples: int = 20,
    methods: Sequence[str] = ("relaxed", "exact"),
    timeout_s: Optional[float] = None,
    max_leaves: Optional[int] = None,
) -> list[BenchRow]:
    """One row per (digits, eps, method); samples are identical across methods."""
    num_classes = digit_net.output_size
    budget = config.timeout_s if timeout_s is None else timeout_s
    rows: list[BenchRow] = []
    reach = max_exact_digits(num_classes, max_leaves)
    if "exact" in methods and any(k > reach for k in digits):
        logger.warning(
            f"exact bounds cover at most {reach} digits at {num_classes} classes; "
            f"larger cells are marked guard and left out of runtime growth"
        )
    for k in digits:
        sys = build_sum_system(digit_net, k, num_classes)
        ds = addition_dataset(k, samples, num_classes, seed)
        for eps in eps_list:
            for method in methods:
                row = run_cell(sys, ds, k, eps, method, budget, max_leaves=max_leaves)
                logger.info(
                    f"digits={k} eps={eps:g} {method}: {row.status}, "
                    f"{row.completed}/{row.samples} samples, mean runtime {row.mean_runtime_s}"
                )
                rows.append(row)
    return rows


def _cell(value: Optional[float], fmt: str) -> str:
    return "" if value is None else format(value, fmt)


def bench_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    for r in rows:
        writer.writerow(
            [
                r.digits,
                repr(r.eps),
                r.method,
                r.status,
                r.completed,
                r.samples,
                _cell(r.mean_runtime_s, ".6f"),
                _cell(r.robustness_pct, ".2f"),
                _cell(r.mean_lower, ".12g"),
                _cell(r.mean_upper, ".12g"),
            ]
        )
    return buf.getvalue()


def runtime_growth(
    rows: Sequence[BenchRow],
    method: str,
    eps: float,
    censored_s: Optional[float] = None,
) -> Optional[float]:
    """Geometric mean of runtime ratios between consecutive digit counts.

    Guarded cells did not run; they are not comparable and are skipped.
    Timed-out cells count as taking at least ``censored_s`` per sample when
    it is given, and are skipped otherwise. None when fewer than two cells
    remain.
    """
    series = []
    for r in rows:
        if r.method != method or r.eps != eps or r.status == "guard":
            continue
        runtime = r.mean_runtime_s
        if r.status != "ok":
            if censored_s is None:
                continue
            runtime = max(runtime or 0.0, censored_s)
        if runtime:
            series.append((r.digits, runtime))
    series.sort()
    if len(series) < 2:
        return None
    logs = [math.log(b[1] / a[1]) for a, b in zip(series, series[1:])]
    return math.exp(math.fsum(logs) / len(logs))

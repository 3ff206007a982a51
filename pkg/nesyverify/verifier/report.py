"""Verification reports and their JSON / CSV emission."""
from __future__ import annotations

import csv
import io
import logging
import math
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, computed_field

from nesyverify.intervals import Interval

logger = logging.getLogger(__name__)

Status = Literal["robust", "unknown"]
Method = Literal["relaxed", "exact"]

CSV_COLUMNS = ("sample_id", "status", "lower_correct", "upper_correct", "runtime_s")


class SampleResult(BaseModel):
    """Outcome for one sample. Bounds are stored unclamped."""

    sample_id: int
    status: Status
    correct_output: int = Field(..., ge=0, description="Output whose bound the decision rests on")
    lower: list[float] = Field(default_factory=list)
    upper: list[float] = Field(default_factory=list)
    runtime_s: float = 0.0
    error: Optional[str] = None

    @property
    def intervals(self) -> list[Interval]:
        return [Interval(lo, hi) for lo, hi in zip(self.lower, self.upper)]

    @property
    def lower_correct(self) -> Optional[float]:
        return self.lower[self.correct_output] if self.lower else None

    @property
    def upper_correct(self) -> Optional[float]:
        return self.upper[self.correct_output] if self.upper else None


def _mean(values: list[float]) -> Optional[float]:
    return math.fsum(values) / len(values) if values else None


class VerificationReport(BaseModel):
    method: Method
    eps: float = Field(..., ge=0)
    mode: str
    samples: list[SampleResult]

    @computed_field
    @property
    def total(self) -> int:
        return len(self.samples)

    @computed_field
    @property
    def robust_count(self) -> int:
        return sum(s.status == "robust" for s in self.samples)

    @computed_field
    @property
    def robustness(self) -> float:
        """Fraction of robust samples; samples that errored count as unknown."""
        return self.robust_count / self.total if self.samples else 0.0

    @computed_field
    @property
    def mean_lower(self) -> Optional[float]:
        return _mean([s.lower_correct for s in self.samples if s.error is None])

    @computed_field
    @property
    def mean_upper(self) -> Optional[float]:
        return _mean([s.upper_correct for s in self.samples if s.error is None])

    @computed_field
    @property
    def mean_runtime_s(self) -> float:
        """Mean over samples that did not error."""
        return _mean([s.runtime_s for s in self.samples if s.error is None]) or 0.0

    @computed_field
    @property
    def errors(self) -> int:
        return sum(s.error is not None for s in self.samples)


def report_csv(report: VerificationReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for s in report.samples:
        writer.writerow(
            [
                s.sample_id,
                s.status,
                "" if s.lower_correct is None else repr(s.lower_correct),
                "" if s.upper_correct is None else repr(s.upper_correct),
                f"{s.runtime_s:.6f}",
            ]
        )
    return buf.getvalue()


def write_report_json(report: VerificationReport, path: Union[str, Path]) -> None:
    Path(path).write_text(report.model_dump_json(indent=2), encoding="utf-8")
    logger.info(f"Wrote report ({report.total} samples, eps={report.eps}) to {path}")


def write_report_csv(report: VerificationReport, path: Union[str, Path]) -> None:
    Path(path).write_text(report_csv(report), encoding="utf-8")

"""Per-sample and per-dataset robustness verification.

Input boxes are pushed through every network with IBP, the resulting
per-output intervals are scattered onto the circuit leaves, and the
circuit is bounded either by interval arithmetic (``relaxed``) or exactly
by vertex enumeration (``exact``). The verifier is sound but incomplete:
a sample is either ``robust`` or ``unknown``.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal, Optional, Sequence, Union

from nesyverify.circuit.evaluate import evaluate_interval, vertex_bounds
from nesyverify.config import config
from nesyverify.intervals import Interval
from nesyverify.nn.layers import Tensor
from nesyverify.nn.network import epsilon_ball, forward_ibp
from nesyverify.utils.errors import QueryError
from nesyverify.verifier.dataset import Dataset
from nesyverify.verifier.report import Method, SampleResult, Status, VerificationReport
from nesyverify.verifier.system import NeSySystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Argmax:
    """Robust iff the correct output's lower bound beats every other upper bound (strict)."""

    correct: int


@dataclass(frozen=True)
class Threshold:
    """Robust iff the lower bound of ``output`` reaches ``threshold`` (inclusive)."""

    output: int
    threshold: float


Mode = Union[Argmax, Threshold]


@dataclass(frozen=True)
class VerificationQuery:
    mode: Mode
    eps: float
    inputs: tuple[Tensor, ...]
    sample_id: int = 0

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if not self.eps >= 0:
            raise QueryError(f"eps must be >= 0, got {self.eps}")


def _check_query(sys: NeSySystem, query: VerificationQuery) -> int:
    mode = query.mode
    index = mode.correct if isinstance(mode, Argmax) else mode.output
    if not 0 <= index < sys.num_outputs:
        raise QueryError(f"output index {index} out of range for a {sys.num_outputs}-output circuit")
    return index


def leaf_bounds(sys: NeSySystem, inputs: Sequence[Tensor], eps: float) -> list[Interval]:
    """Leaf intervals induced by the eps-ball around ``inputs``.

    Network bounds are clipped into [0, 1]; bound networks end in softmax or
    sigmoid, so clipping only removes float overshoot.
    """
    arrays = sys.check_inputs(inputs)
    boxes = [epsilon_ball(x, eps, sys.domain) for x in arrays]
    out = {k: forward_ibp(sys.networks[k], boxes[sys.inputs[k]]) for k in sys.binding.networks}
    bounds = [Interval(0.0, 0.0)] * sys.circuit.num_leaves
    for e in sys.binding.entries:
        b = out[e.network]
        lo = min(max(float(b.lower[e.output]), 0.0), 1.0)
        hi = min(max(float(b.upper[e.output]), 0.0), 1.0)
        bounds[e.leaf] = Interval(lo, hi)
    for c in sys.binding.constants:
        bounds[c.leaf] = Interval.point(c.value)
    return bounds


def decide(mode: Mode, bounds: Sequence[Interval]) -> Status:
    if isinstance(mode, Argmax):
        lower = bounds[mode.correct].lo
        ok = all(lower > iv.hi for j, iv in enumerate(bounds) if j != mode.correct)
    else:
        ok = bounds[mode.output].lo >= mode.threshold
    return "robust" if ok else "unknown"


def _verify(
    sys: NeSySystem,
    query: VerificationQuery,
    method: Method,
    max_leaves: Optional[int] = None,
) -> SampleResult:
    correct = _check_query(sys, query)
    start = time.perf_counter()
    bounds = leaf_bounds(sys, query.inputs, query.eps)
    if method == "exact":
        outputs = vertex_bounds(sys.circuit, bounds, max_leaves=max_leaves)
    else:
        outputs = evaluate_interval(sys.circuit, bounds)
    status = decide(query.mode, outputs)
    return SampleResult(
        sample_id=query.sample_id,
        status=status,
        correct_output=correct,
        lower=[iv.lo for iv in outputs],
        upper=[iv.hi for iv in outputs],
        runtime_s=time.perf_counter() - start,
    )


def verify_sample(sys: NeSySystem, query: VerificationQuery) -> SampleResult:
    """IBP through the networks, interval arithmetic through the circuit."""
    return _verify(sys, query, "relaxed")


def verify_sample_exact_symbolic(
    sys: NeSySystem, query: VerificationQuery, max_leaves: Optional[int] = None
) -> SampleResult:
    """IBP through the networks, exact range of the circuit over the leaf box."""
    return _verify(sys, query, "exact", max_leaves=max_leaves)


def _mode_name(mode: Union[Literal["argmax"], Threshold]) -> str:
    if isinstance(mode, Threshold):
        return f"threshold(output={mode.output}, T={mode.threshold})"
    return "argmax"


def verify_dataset(
    sys: NeSySystem,
    dataset: Dataset,
    eps: float,
    mode: Union[Literal["argmax"], Threshold] = "argmax",
    method: Method = "relaxed",
    threads: Optional[int] = None,
    max_leaves: Optional[int] = None,
) -> VerificationReport:
    """Verify every sample; per-sample failures are recorded, not raised.

    ``"argmax"`` takes each sample's label as the correct output. Results
    keep dataset order regardless of ``threads``.
    """
    if len(dataset) == 0:
        raise QueryError("dataset is empty")
    if not eps >= 0:
        raise QueryError(f"eps must be >= 0, got {eps}")
    if mode != "argmax" and not isinstance(mode, Threshold):
        raise QueryError(f"unknown mode {mode!r}")
    if mode == "argmax" and dataset.labels is None:
        raise QueryError("argmax verification needs dataset labels")

    def run(n: int) -> SampleResult:
        m = Argmax(dataset.label(n)) if mode == "argmax" else mode
        query = VerificationQuery(m, eps, tuple(dataset.sample(n)), sample_id=n)
        try:
            return _verify(sys, query, method, max_leaves=max_leaves)
        except Exception as e:
            logger.warning(f"Sample {n} failed at eps={eps}: {e}")
            correct = m.correct if isinstance(m, Argmax) else m.output
            return SampleResult(
                sample_id=n,
                status="unknown",
                correct_output=max(correct, 0),
                error=f"{type(e).__name__}: {e}",
            )

    workers = max(1, threads or config.threads)
    if workers == 1:
        samples = [run(n) for n in range(len(dataset))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(run, range(len(dataset))))
    report = VerificationReport(method=method, eps=eps, mode=_mode_name(mode), samples=samples)
    logger.info(
        f"eps={eps:g} {method}: robust {report.robust_count}/{report.total} "
        f"({100 * report.robustness:.2f}%), mean runtime {report.mean_runtime_s:.4f}s"
    )
    return report

"""Circuit evaluators: concrete, batched, interval (relaxed) and exact over a box.

The exact evaluator relies on multilinearity: a circuit whose outputs have
degree at most one in every leaf attains its extrema over a box at the
box's vertices, so enumerating vertices yields the exact range.
"""
import logging
from typing import Mapping, Optional, Sequence

import numpy as np

from nesyverify.circuit.model import Circuit, LeafBounds, NodeKind
from nesyverify.config import config
from nesyverify.intervals import Interval, iv_add, iv_mul, iv_one_minus
from nesyverify.logic.formula import VarId
from nesyverify.logic.oracles import IntervalWeightMap, check_interval_weight_map
from nesyverify.utils.errors import CircuitError, EnumerationGuardError

logger = logging.getLogger(__name__)


def _check_length(c: Circuit, n: int, what: str) -> None:
    if n != c.num_leaves:
        raise CircuitError(f"{what} has length {n}, circuit has {c.num_leaves} leaves")


def check_leaf_bounds(c: Circuit, bounds: LeafBounds) -> None:
    _check_length(c, len(bounds), "leaf bounds")
    for i, iv in enumerate(bounds):
        if iv.lo < 0.0 or iv.hi > 1.0:
            raise CircuitError(f"bounds of leaf {i} must lie within [0, 1], got {iv}")


def evaluate(c: Circuit, leaf_values: Sequence[float]) -> list[float]:
    """Value of every output for one leaf vector (single bottom-up pass)."""
    c.ensure_valid()
    _check_length(c, len(leaf_values), "leaf values")
    vals: list[float] = [0.0] * c.num_nodes
    for k, node in enumerate(c.nodes):
        kind = node.kind
        if kind is NodeKind.LEAF:
            vals[k] = float(leaf_values[node.leaf])
        elif kind is NodeKind.CONST:
            vals[k] = node.value
        elif kind is NodeKind.ADD:
            acc = vals[node.children[0]]
            for ch in node.children[1:]:
                acc = acc + vals[ch]
            vals[k] = acc
        elif kind is NodeKind.MUL:
            acc = vals[node.children[0]]
            for ch in node.children[1:]:
                acc = acc * vals[ch]
            vals[k] = acc
        else:
            vals[k] = 1.0 - vals[node.children[0]]
    return [vals[o] for o in c.outputs]


def evaluate_batch(c: Circuit, leaf_matrix: np.ndarray) -> np.ndarray:
    """Evaluate many leaf vectors at once: (batch, leaves) -> (batch, outputs).

    Operation order matches ``evaluate`` so each row is bit-identical to it.
    """
    c.ensure_valid()
    leaf_matrix = np.asarray(leaf_matrix, dtype=np.float64)
    if leaf_matrix.ndim != 2:
        raise CircuitError(f"leaf matrix must be 2-D, got shape {leaf_matrix.shape}")
    _check_length(c, leaf_matrix.shape[1], "leaf matrix rows")
    batch = leaf_matrix.shape[0]
    vals: list[np.ndarray] = [None] * c.num_nodes  # type: ignore[list-item]
    for k, node in enumerate(c.nodes):
        kind = node.kind
        if kind is NodeKind.LEAF:
            vals[k] = leaf_matrix[:, node.leaf]
        elif kind is NodeKind.CONST:
            vals[k] = np.full(batch, node.value)
        elif kind is NodeKind.ADD:
            acc = vals[node.children[0]]
            for ch in node.children[1:]:
                acc = acc + vals[ch]
            vals[k] = acc
        elif kind is NodeKind.MUL:
            acc = vals[node.children[0]]
            for ch in node.children[1:]:
                acc = acc * vals[ch]
            vals[k] = acc
        else:
            vals[k] = 1.0 - vals[node.children[0]]
    return np.stack([vals[o] for o in c.outputs], axis=1)


def evaluate_interval(c: Circuit, bounds: LeafBounds) -> list[Interval]:
    """Relaxed output bounds by interval arithmetic; sound, possibly loose, unclamped."""
    c.ensure_valid()
    check_leaf_bounds(c, bounds)
    vals: list[Interval] = [None] * c.num_nodes  # type: ignore[list-item]
    for k, node in enumerate(c.nodes):
        kind = node.kind
        if kind is NodeKind.LEAF:
            vals[k] = bounds[node.leaf]
        elif kind is NodeKind.CONST:
            vals[k] = Interval.point(node.value)
        elif kind is NodeKind.ADD:
            acc = vals[node.children[0]]
            for ch in node.children[1:]:
                acc = iv_add(acc, vals[ch])
            vals[k] = acc
        elif kind is NodeKind.MUL:
            acc = vals[node.children[0]]
            for ch in node.children[1:]:
                acc = iv_mul(acc, vals[ch])
            vals[k] = acc
        else:
            vals[k] = iv_one_minus(vals[node.children[0]])
    return [vals[o] for o in c.outputs]


def free_leaves(c: Circuit, bounds: LeafBounds) -> list[int]:
    """Leaves that the circuit uses and whose interval is not a point."""
    return [i for i in sorted(c.used_leaves) if not bounds[i].is_degenerate]


def vertex_bounds(
    c: Circuit,
    bounds: LeafBounds,
    max_leaves: Optional[int] = None,
    chunk: Optional[int] = None,
) -> list[Interval]:
    """Exact output range over the box by enumerating its 2^L vertices.

    Exact only for circuits multilinear in every leaf (compiled smooth
    d-DNNF, sum circuits). Degenerate and unused leaves stay fixed.
    """
    c.ensure_valid()
    check_leaf_bounds(c, bounds)
    free = free_leaves(c, bounds)
    limit = config.vertex_max_leaves if max_leaves is None else max_leaves
    if len(free) > limit:
        raise EnumerationGuardError("non-degenerate leaf count", len(free), limit)
    block = min(1 << len(free), chunk or config.vertex_chunk)
    base = np.array([iv.lo for iv in bounds], dtype=np.float64)
    lo_vals = np.array([bounds[i].lo for i in free])
    hi_vals = np.array([bounds[i].hi for i in free])
    lows = np.full(len(c.outputs), np.inf)
    highs = np.full(len(c.outputs), -np.inf)
    for start in range(0, 1 << len(free), block):
        idx = np.arange(start, min(start + block, 1 << len(free)), dtype=np.int64)
        matrix = np.tile(base, (len(idx), 1))
        for j, leaf in enumerate(free):
            matrix[:, leaf] = np.where((idx >> j) & 1, hi_vals[j], lo_vals[j])
        out = evaluate_batch(c, matrix)
        lows = np.minimum(lows, out.min(axis=0))
        highs = np.maximum(highs, out.max(axis=0))
    return [Interval(float(lo), float(hi)) for lo, hi in zip(lows, highs)]


def interval_weights_to_bounds(
    c: Circuit, iw: IntervalWeightMap | Mapping[VarId, Interval]
) -> list[Interval]:
    check_interval_weight_map(iw)
    by_index = {v.index: iv for v, iv in iw.items()}
    missing = [i for i in sorted(c.used_leaves) if i not in by_index]
    if missing:
        raise CircuitError(f"no interval weight for leaves {missing}")
    return [by_index.get(i, Interval(0.0, 0.0)) for i in range(c.num_leaves)]


def e_wmc_decide(
    c: Circuit,
    iw: IntervalWeightMap,
    threshold: float,
    output: int = 0,
    max_leaves: Optional[int] = None,
) -> bool:
    """Does some weight vector in the box push the WMC output to at least ``threshold``?"""
    bounds = interval_weights_to_bounds(c, iw)
    best = vertex_bounds(c, bounds, max_leaves=max_leaves)[output].hi
    return best >= threshold

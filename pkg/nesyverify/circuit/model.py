"""Arithmetic circuit data structure.

A circuit is a topologically ordered node list (children precede parents)
over leaves ``0..num_leaves-1`` with one or more declared outputs. Node
kinds: leaf, constant, n-ary add, n-ary mul and one-minus.
"""
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

from nesyverify.intervals import Interval
from nesyverify.utils.errors import CircuitError

LeafBounds = Sequence[Interval]


class NodeKind(str, Enum):
    LEAF = "L"
    CONST = "C"
    ADD = "+"
    MUL = "*"
    ONE_MINUS = "~"


@dataclass(frozen=True, slots=True)
class CircuitNode:
    kind: NodeKind
    children: tuple[int, ...] = ()
    leaf: int = -1
    value: float = 0.0


@dataclass(frozen=True)
class Circuit:
    nodes: tuple[CircuitNode, ...]
    outputs: tuple[int, ...]
    num_leaves: int

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @cached_property
    def diagnostics(self) -> list[str]:
        return validate(self)

    def ensure_valid(self) -> None:
        if self.diagnostics:
            raise CircuitError("invalid circuit: " + "; ".join(self.diagnostics))

    @cached_property
    def used_leaves(self) -> frozenset[int]:
        return frozenset(n.leaf for n in self.nodes if n.kind is NodeKind.LEAF)


def validate(c: Circuit) -> list[str]:
    """List every structural invariant violation; empty when well-formed."""
    problems: list[str] = []
    if c.num_leaves < 0:
        problems.append(f"negative leaf count {c.num_leaves}")
    for k, node in enumerate(c.nodes):
        if node.kind is NodeKind.LEAF:
            if not 0 <= node.leaf < c.num_leaves:
                problems.append(f"leaf out of range at node {k} (leaf {node.leaf}, leaf count {c.num_leaves})")
        elif node.kind is NodeKind.CONST:
            if node.value != node.value or node.value in (float("inf"), float("-inf")):
                problems.append(f"non-finite constant at node {k}")
        elif node.kind is NodeKind.ONE_MINUS:
            if len(node.children) != 1:
                problems.append(f"arity violation at node {k} (one-minus needs exactly 1 child)")
        elif not node.children:
            problems.append(f"arity violation at node {k} ({node.kind.name.lower()} needs at least 1 child)")
        for child in node.children:
            if not 0 <= child < len(c.nodes):
                problems.append(f"dangling child {child} at node {k}")
            elif child >= k:
                problems.append(f"topology violation at node {k} (child {child} does not precede it)")
    if not c.outputs:
        problems.append("circuit declares no outputs")
    for out in c.outputs:
        if not 0 <= out < len(c.nodes):
            problems.append(f"output {out} refers to no node")
    return problems


class CircuitBuilder:
    """Incremental circuit construction with structural hashing.

    Identical nodes are shared. ``mul`` drops constant-1 children and folds
    a constant-0 child to 0; ``add`` drops constant-0 children.
    """

    def __init__(self, num_leaves: int):
        self.num_leaves = num_leaves
        self._nodes: list[CircuitNode] = []
        self._index: dict[CircuitNode, int] = {}

    def _intern(self, node: CircuitNode) -> int:
        existing = self._index.get(node)
        if existing is not None:
            return existing
        self._nodes.append(node)
        self._index[node] = len(self._nodes) - 1
        return len(self._nodes) - 1

    def node(self, k: int) -> CircuitNode:
        return self._nodes[k]

    def leaf(self, i: int) -> int:
        if not 0 <= i < self.num_leaves:
            raise CircuitError(f"leaf {i} out of range for {self.num_leaves} leaves")
        return self._intern(CircuitNode(NodeKind.LEAF, leaf=i))

    def const(self, value: float) -> int:
        return self._intern(CircuitNode(NodeKind.CONST, value=float(value)))

    def _is_const(self, k: int, value: float) -> bool:
        n = self._nodes[k]
        return n.kind is NodeKind.CONST and n.value == value

    def add(self, children: Iterable[int]) -> int:
        kept = tuple(c for c in children if not self._is_const(c, 0.0))
        if not kept:
            return self.const(0.0)
        if len(kept) == 1:
            return kept[0]
        return self._intern(CircuitNode(NodeKind.ADD, children=kept))

    def mul(self, children: Iterable[int]) -> int:
        children = tuple(children)
        if any(self._is_const(c, 0.0) for c in children):
            return self.const(0.0)
        kept = tuple(c for c in children if not self._is_const(c, 1.0))
        if not kept:
            return self.const(1.0)
        if len(kept) == 1:
            return kept[0]
        return self._intern(CircuitNode(NodeKind.MUL, children=kept))

    def one_minus(self, child: int) -> int:
        return self._intern(CircuitNode(NodeKind.ONE_MINUS, children=(child,)))

    def build(self, outputs: Sequence[int]) -> Circuit:
        return Circuit(tuple(self._nodes), tuple(outputs), self.num_leaves)


def circuit_stats(c: Circuit) -> dict:
    """Node counts per kind, depth, leaf and output counts."""
    depth = [0] * c.num_nodes
    for k, node in enumerate(c.nodes):
        if node.children:
            depth[k] = 1 + max(depth[ch] for ch in node.children)
    counts = {kind.name.lower(): 0 for kind in NodeKind}
    for node in c.nodes:
        counts[node.kind.name.lower()] += 1
    return {
        "num_nodes": c.num_nodes,
        "num_leaves": c.num_leaves,
        "num_outputs": len(c.outputs),
        "used_leaves": len(c.used_leaves),
        "depth": max((depth[o] for o in c.outputs), default=0),
        "edges": sum(len(n.children) for n in c.nodes),
        "by_kind": counts,
    }

"""Top-down compilation of formulas into decision-DNNF.

Shannon expansion ``f = (v & f|v) | (!v & f|!v)`` along a fixed variable
order, with unit propagation, connected-component decomposition of
conjunctions, and a cache keyed on the canonicalised residual formula.

A decision node ``DecisionOr(v, hi, lo)`` stands for ``(v & hi) | (!v & lo)``;
neither branch mentions ``v``. Nodes live in a ``DnnfGraph`` table with
structural hashing, so equal sub-circuits share one id.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional, Sequence

from nesyverify.config import config
from nesyverify.logic.formula import (
    And,
    ConstFalse,
    ConstTrue,
    Formula,
    Or,
    VarId,
    children_of,
    condition,
    literal_of,
    simplify,
    variables,
)
from nesyverify.utils.errors import CompileError, EnumerationGuardError

logger = logging.getLogger(__name__)


class DnnfKind(str, Enum):
    LITERAL = "literal"
    TRUE = "true"
    FALSE = "false"
    DECISION = "decision"
    AND = "and"


@dataclass(frozen=True, slots=True)
class DnnfNode:
    kind: DnnfKind
    var: int = -1
    polarity: bool = True
    # AND: child ids; DECISION: (hi, lo)
    children: tuple[int, ...] = ()


class DnnfGraph:
    """Shared node table with structural hashing."""

    def __init__(self):
        self._nodes: list[DnnfNode] = []
        self._index: dict[DnnfNode, int] = {}
        self._vars: list[frozenset[int]] = []
        self.false = self._intern(DnnfNode(DnnfKind.FALSE))
        self.true = self._intern(DnnfNode(DnnfKind.TRUE))

    def __len__(self) -> int:
        return len(self._nodes)

    def node(self, k: int) -> DnnfNode:
        return self._nodes[k]

    def vars_of(self, k: int) -> frozenset[int]:
        return self._vars[k]

    def _intern(self, node: DnnfNode) -> int:
        existing = self._index.get(node)
        if existing is not None:
            return existing
        if node.kind is DnnfKind.LITERAL:
            vs = frozenset((node.var,))
        elif node.kind is DnnfKind.DECISION:
            vs = frozenset((node.var,)).union(*(self._vars[c] for c in node.children))
        else:
            vs = frozenset().union(*(self._vars[c] for c in node.children))
        self._nodes.append(node)
        self._vars.append(vs)
        self._index[node] = len(self._nodes) - 1
        return len(self._nodes) - 1

    def literal(self, var: int, polarity: bool) -> int:
        return self._intern(DnnfNode(DnnfKind.LITERAL, var=var, polarity=polarity))

    def conj(self, children: Sequence[int]) -> int:
        flat: set[int] = set()
        for c in children:
            node = self._nodes[c]
            if node.kind is DnnfKind.FALSE:
                return self.false
            if node.kind is DnnfKind.TRUE:
                continue
            if node.kind is DnnfKind.AND:
                flat.update(node.children)
            else:
                flat.add(c)
        if not flat:
            return self.true
        if len(flat) == 1:
            return next(iter(flat))
        seen: set[int] = set()
        for c in flat:
            if seen & self._vars[c]:
                raise CompileError("conjunction children share variables (not decomposable)")
            seen |= self._vars[c]
        return self._intern(DnnfNode(DnnfKind.AND, children=tuple(sorted(flat))))

    def decision(self, var: int, hi: int, lo: int) -> int:
        if var in self._vars[hi] or var in self._vars[lo]:
            raise CompileError(f"decision branches must not mention their variable {var}")
        if hi == self.false and lo == self.false:
            return self.false
        if hi == self.false:
            return self.conj((self.literal(var, False), lo))
        if lo == self.false:
            return self.conj((self.literal(var, True), hi))
        return self._intern(DnnfNode(DnnfKind.DECISION, var=var, children=(hi, lo)))

    def gadget(self, var: int) -> int:
        """Don't-care node ``v | !v`` (evaluates to p + (1 - p))."""
        return self._intern(DnnfNode(DnnfKind.DECISION, var=var, children=(self.true, self.true)))

    def reachable(self, root: int) -> list[int]:
        """Ids reachable from ``root`` in topological order (children first)."""
        order: list[int] = []
        seen: set[int] = set()
        stack: list[tuple[int, bool]] = [(root, False)]
        while stack:
            k, expanded = stack.pop()
            if expanded:
                order.append(k)
                continue
            if k in seen:
                continue
            seen.add(k)
            stack.append((k, True))
            stack.extend((c, False) for c in self._nodes[k].children if c not in seen)
        return order


@dataclass(frozen=True)
class DecisionDnnf:
    graph: DnnfGraph
    root: int

    @property
    def node(self) -> DnnfNode:
        return self.graph.node(self.root)

    @property
    def size(self) -> int:
        return len(self.graph.reachable(self.root))

    def is_false(self) -> bool:
        return self.node.kind is DnnfKind.FALSE

    def is_smooth(self) -> bool:
        for k in self.graph.reachable(self.root):
            node = self.graph.node(k)
            if node.kind is DnnfKind.DECISION:
                hi, lo = node.children
                if self.graph.false in (hi, lo):
                    continue
                if self.graph.vars_of(hi) != self.graph.vars_of(lo):
                    return False
        return True

    def model_count(self, num_vars: int) -> int:
        """Models over variables ``0..num_vars-1``; smoothness not required."""
        g = self.graph
        counts: dict[int, int] = {}
        for k in g.reachable(self.root):
            node = g.node(k)
            if node.kind is DnnfKind.FALSE:
                counts[k] = 0
            elif node.kind in (DnnfKind.TRUE, DnnfKind.LITERAL):
                counts[k] = 1
            elif node.kind is DnnfKind.AND:
                total = 1
                for c in node.children:
                    total *= counts[c]
                counts[k] = total
            else:
                width = len(g.vars_of(k)) - 1
                counts[k] = sum(
                    counts[c] << (width - len(g.vars_of(c))) for c in node.children
                )
        return counts[self.root] << (num_vars - len(g.vars_of(self.root)))

    def wmc(self, weights: Mapping[int, float]) -> float:
        """Weighted model count from positive-literal weights keyed by variable index."""
        g = self.graph
        vals: dict[int, float] = {}
        for k in g.reachable(self.root):
            node = g.node(k)
            if node.kind is DnnfKind.FALSE:
                vals[k] = 0.0
            elif node.kind is DnnfKind.TRUE:
                vals[k] = 1.0
            elif node.kind is DnnfKind.LITERAL:
                p = weights[node.var]
                vals[k] = p if node.polarity else 1.0 - p
            elif node.kind is DnnfKind.AND:
                acc = 1.0
                for c in node.children:
                    acc *= vals[c]
                vals[k] = acc
            else:
                p = weights[node.var]
                hi, lo = node.children
                vals[k] = p * vals[hi] + (1.0 - p) * vals[lo]
        return vals[self.root]


class CompileCache:
    """Canonicalised residual formula -> compiled node id, for one graph."""

    def __init__(self):
        self._table: dict[Formula, int] = {}
        self.hits = 0
        self.misses = 0

    @staticmethod
    def canonical(f: Formula) -> Formula:
        if isinstance(f, (And, Or)):
            return type(f)(tuple(sorted(f.children, key=repr)))
        return f

    def get(self, f: Formula) -> Optional[int]:
        k = self._table.get(self.canonical(f))
        if k is None:
            self.misses += 1
        else:
            self.hits += 1
        return k

    def put(self, f: Formula, node: int) -> None:
        self._table[self.canonical(f)] = node

    def __len__(self) -> int:
        return len(self._table)


def _components(f: And) -> list[Formula]:
    """Split a conjunction into groups of children connected by shared variables."""
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    child_vars = [[v.index for v in variables(c)] for c in f.children]
    for vs in child_vars:
        for v in vs[1:]:
            parent[find(v)] = find(vs[0])
    groups: dict[int, list[Formula]] = {}
    for c, vs in zip(f.children, child_vars):
        groups.setdefault(find(vs[0]) if vs else -1, []).append(c)
    return [g[0] if len(g) == 1 else And(tuple(g)) for g in groups.values()]


class Compiler:
    """Shannon-expansion compiler sharing one graph and cache across formulas."""

    def __init__(
        self,
        order: Sequence[VarId],
        graph: Optional[DnnfGraph] = None,
        cache: Optional[CompileCache] = None,
    ):
        self.graph = graph or DnnfGraph()
        self.cache = cache or CompileCache()
        self._rank = {v.index: r for r, v in enumerate(order)}

    def compile(self, f: Formula) -> int:
        if isinstance(f, ConstTrue):
            return self.graph.true
        if isinstance(f, ConstFalse):
            return self.graph.false
        cached = self.cache.get(f)
        if cached is not None:
            return cached
        result = self._expand(f)
        self.cache.put(f, result)
        return result

    def _unit_literals(self, f: Formula) -> Optional[dict[int, bool]]:
        """Forced literals of ``f``; None on a contradiction between them."""
        candidates = children_of(f) if isinstance(f, And) else (f,)
        units: dict[int, bool] = {}
        for c in candidates:
            lit = literal_of(c)
            if lit is None:
                continue
            var, pol = lit
            if units.get(var, pol) != pol:
                return None
            units[var] = pol
        return units

    def _expand(self, f: Formula) -> int:
        g = self.graph
        forced: dict[int, bool] = {}
        while True:
            units = self._unit_literals(f)
            if units is None:
                return g.false
            if not units:
                break
            forced.update(units)
            f = condition(f, units)
            if isinstance(f, ConstFalse):
                return g.false
        if forced:
            lits = [g.literal(v, pol) for v, pol in forced.items()]
            return g.conj(lits + [self.compile(f)])
        if isinstance(f, And):
            parts = _components(f)
            if len(parts) > 1:
                return g.conj([self.compile(p) for p in parts])
        try:
            var = min((v.index for v in variables(f)), key=self._rank.__getitem__)
        except KeyError as e:
            raise CompileError(f"variable index {e.args[0]} missing from the order") from None
        hi = self.compile(condition(f, {var: True}))
        lo = self.compile(condition(f, {var: False}))
        return g.decision(var, hi, lo)


def compile_formula(
    f: Formula,
    order: Optional[Sequence[VarId]] = None,
    max_vars: Optional[int] = None,
    compiler: Optional[Compiler] = None,
) -> DecisionDnnf:
    """Compile ``f`` to decision-DNNF along ``order`` (default: first appearance)."""
    fvars = variables(f)
    limit = config.compile_max_vars if max_vars is None else max_vars
    if len(fvars) > limit:
        raise EnumerationGuardError("compile variable count", len(fvars), limit)
    if order is None:
        order = fvars
    if len(set(order)) != len(order) or set(order) != set(fvars):
        raise CompileError("order must be a permutation of the formula's variables")
    if compiler is None:
        compiler = Compiler(order)
    root = compiler.compile(simplify(f))
    logger.debug(
        f"Compiled formula over {len(fvars)} variables: {len(compiler.graph)} nodes, "
        f"cache {compiler.cache.hits} hits / {compiler.cache.misses} misses"
    )
    return DecisionDnnf(compiler.graph, root)


def smooth(d: DecisionDnnf) -> DecisionDnnf:
    """Make both branches of every decision mention the same variables.

    Missing variables are multiplied into a branch as don't-care gadgets.
    Already-smooth input comes back with the same root id.
    """
    g = d.graph
    mapped: dict[int, int] = {}
    for k in g.reachable(d.root):
        node = g.node(k)
        if node.kind is DnnfKind.AND:
            mapped[k] = g.conj([mapped[c] for c in node.children])
        elif node.kind is DnnfKind.DECISION:
            hi, lo = (mapped[c] for c in node.children)
            if g.false not in (hi, lo):
                vh, vl = g.vars_of(hi), g.vars_of(lo)
                hi = g.conj([hi] + [g.gadget(u) for u in sorted(vl - vh)])
                lo = g.conj([lo] + [g.gadget(u) for u in sorted(vh - vl)])
            mapped[k] = g.decision(node.var, hi, lo)
        else:
            mapped[k] = k
    return DecisionDnnf(g, mapped[d.root])

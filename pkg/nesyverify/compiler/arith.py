"""NAT-semiring translation of smooth decision-DNNF into an arithmetic circuit.

And -> mul, DecisionOr(v, hi, lo) -> v * hi + (1 - v) * lo, positive
literal -> leaf, negative literal -> one-minus(leaf), True -> 1, False -> 0.
Leaf ``i`` holds the probability of variable index ``i``.
"""
from typing import Optional

from nesyverify.circuit.model import Circuit, CircuitBuilder
from nesyverify.compiler.dnnf import DecisionDnnf, DnnfKind
from nesyverify.utils.errors import CompileError


def emit_arith(d: DecisionDnnf, builder: CircuitBuilder) -> int:
    """Add the translation of ``d`` to ``builder`` and return its root node id.

    Several roots emitted into one builder share common sub-circuits.
    """
    if not d.is_smooth():
        raise CompileError("decision-DNNF must be smoothed before translation")
    g = d.graph
    order = g.reachable(d.root)
    ids: dict[int, int] = {}
    for k in order:
        node = g.node(k)
        if node.kind is DnnfKind.TRUE:
            ids[k] = builder.const(1.0)
        elif node.kind is DnnfKind.FALSE:
            ids[k] = builder.const(0.0)
        elif node.kind is DnnfKind.LITERAL:
            leaf = builder.leaf(node.var)
            ids[k] = leaf if node.polarity else builder.one_minus(leaf)
        elif node.kind is DnnfKind.AND:
            ids[k] = builder.mul(ids[c] for c in node.children)
        else:
            hi, lo = node.children
            leaf = builder.leaf(node.var)
            ids[k] = builder.add(
                (
                    builder.mul((leaf, ids[hi])),
                    builder.mul((builder.one_minus(leaf), ids[lo])),
                )
            )
    return ids[d.root]


def to_arith_circuit(d: DecisionDnnf, num_leaves: Optional[int] = None) -> Circuit:
    """Translate ``d`` into a one-output circuit.

    ``num_leaves`` defaults to one past the largest variable index in ``d``.
    """
    if num_leaves is None:
        num_leaves = max(d.graph.vars_of(d.root), default=-1) + 1
    builder = CircuitBuilder(num_leaves)
    return builder.build([emit_arith(d, builder)])

"""Line-oriented circuit text format.

::

    ac <num_leaves> <num_nodes> <num_outputs>
    L <leaf>
    C <value>
    + <k> <id> ... <id>
    * <k> <id> ... <id>
    ~ <id>
    o <k> <id> ... <id>

Node lines appear in topological order and are numbered from 0. Constants
use Python's shortest round-trip float repr, so files round-trip exactly.
"""
import math
from pathlib import Path

from nesyverify.circuit.model import Circuit, CircuitNode, NodeKind
from nesyverify.utils.errors import CircuitFormatError


def dumps_circuit(c: Circuit) -> str:
    lines = [f"ac {c.num_leaves} {c.num_nodes} {len(c.outputs)}"]
    for node in c.nodes:
        if node.kind is NodeKind.LEAF:
            lines.append(f"L {node.leaf}")
        elif node.kind is NodeKind.CONST:
            lines.append(f"C {node.value!r}")
        elif node.kind is NodeKind.ONE_MINUS:
            lines.append(f"~ {node.children[0]}")
        else:
            ids = " ".join(str(ch) for ch in node.children)
            lines.append(f"{node.kind.value} {len(node.children)} {ids}")
    lines.append(f"o {len(c.outputs)} " + " ".join(str(o) for o in c.outputs))
    return "\n".join(lines) + "\n"


def _ints(parts: list[str], lineno: int) -> list[int]:
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise CircuitFormatError(f"expected integers at line {lineno}: {' '.join(parts)!r}") from None


def _counted(parts: list[str], lineno: int) -> tuple[int, ...]:
    values = _ints(parts, lineno)
    if not values or values[0] != len(values) - 1:
        raise CircuitFormatError(f"child count does not match the id list at line {lineno}")
    return tuple(values[1:])


def loads_circuit(text: str) -> Circuit:
    """Parse circuit text; structural invariants are checked separately by ``validate``."""
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if not lines:
        raise CircuitFormatError("empty circuit file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 4 or parts[0] != "ac":
        raise CircuitFormatError(f"expected 'ac <leaves> <nodes> <outputs>' header at line {lineno}")
    num_leaves, num_nodes, num_outputs = _ints(parts[1:], lineno)
    if len(lines) != num_nodes + 2:
        raise CircuitFormatError(
            f"header declares {num_nodes} nodes, file has {len(lines) - 2} node lines"
        )
    nodes: list[CircuitNode] = []
    for lineno, line in lines[1:-1]:
        tag, *rest = line.split()
        if tag == "L":
            if len(rest) != 1:
                raise CircuitFormatError(f"leaf line needs one index at line {lineno}")
            nodes.append(CircuitNode(NodeKind.LEAF, leaf=_ints(rest, lineno)[0]))
        elif tag == "C":
            try:
                value = float(rest[0]) if len(rest) == 1 else math.nan
            except ValueError:
                value = math.nan
            if not math.isfinite(value):
                raise CircuitFormatError(f"constant line needs one finite value at line {lineno}")
            nodes.append(CircuitNode(NodeKind.CONST, value=value))
        elif tag in ("+", "*"):
            kind = NodeKind.ADD if tag == "+" else NodeKind.MUL
            nodes.append(CircuitNode(kind, children=_counted(rest, lineno)))
        elif tag == "~":
            children = tuple(_ints(rest, lineno))
            if len(children) != 1:
                raise CircuitFormatError(f"one-minus line needs one child at line {lineno}")
            nodes.append(CircuitNode(NodeKind.ONE_MINUS, children=children))
        else:
            raise CircuitFormatError(f"unknown node tag {tag!r} at line {lineno}")
    lineno, out_line = lines[-1]
    tag, *rest = out_line.split()
    if tag != "o":
        raise CircuitFormatError(f"expected output line 'o <k> <ids>' at line {lineno}")
    outputs = _counted(rest, lineno)
    if len(outputs) != num_outputs:
        raise CircuitFormatError(f"header declares {num_outputs} outputs, found {len(outputs)}")
    return Circuit(tuple(nodes), outputs, num_leaves)


def write_circuit(c: Circuit, path: str | Path) -> None:
    Path(path).write_text(dumps_circuit(c))


def read_circuit(path: str | Path) -> Circuit:
    return loads_circuit(Path(path).read_text())

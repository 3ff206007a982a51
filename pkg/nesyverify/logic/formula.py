"""Propositional formula AST.

Nodes are frozen dataclasses, so formulas are hashable and compare
structurally. Variables carry their pool index and name.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

import numpy as np

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True, slots=True)
class VarId:
    index: int
    name: str

    def __str__(self) -> str:
        return self.name


class VariablePool:
    """Dense variable registry: indices 0..n-1, unique names."""

    def __init__(self, names: list[str] | None = None):
        self._vars: list[VarId] = []
        self._by_name: dict[str, VarId] = {}
        for name in names or []:
            self.add(name)

    def add(self, name: str) -> VarId:
        if name in self._by_name:
            raise ValueError(f"Variable '{name}' already registered")
        var = VarId(len(self._vars), name)
        self._vars.append(var)
        self._by_name[name] = var
        return var

    def get_or_create(self, name: str) -> VarId:
        var = self._by_name.get(name)
        return var if var is not None else self.add(name)

    def __getitem__(self, key: int | str) -> VarId:
        if isinstance(key, str):
            return self._by_name[key]
        return self._vars[key]

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __len__(self) -> int:
        return len(self._vars)

    def __iter__(self) -> Iterator[VarId]:
        return iter(self._vars)

    @property
    def variables(self) -> list[VarId]:
        return list(self._vars)

    @property
    def names(self) -> list[str]:
        return [v.name for v in self._vars]


@dataclass(frozen=True, slots=True)
class Var:
    var: VarId


@dataclass(frozen=True, slots=True)
class Not:
    child: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    children: tuple["Formula", ...]


@dataclass(frozen=True, slots=True)
class Or:
    children: tuple["Formula", ...]


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class ConstTrue:
    pass


@dataclass(frozen=True, slots=True)
class ConstFalse:
    pass


Formula = Union[Var, Not, And, Or, Implies, Iff, ConstTrue, ConstFalse]

TRUE = ConstTrue()
FALSE = ConstFalse()


def children_of(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Not):
        return (f.child,)
    if isinstance(f, (And, Or)):
        return f.children
    if isinstance(f, (Implies, Iff)):
        return (f.left, f.right)
    return ()


def variables(f: Formula) -> list[VarId]:
    """Variables of ``f`` in first-appearance (left-to-right) order."""
    seen: dict[VarId, None] = {}
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            seen.setdefault(node.var, None)
        else:
            stack.extend(reversed(children_of(node)))
    return list(seen)


def evaluate(f: Formula, assignment: Mapping[int, bool]) -> bool:
    """Truth value of ``f`` under an assignment keyed by variable index."""
    if isinstance(f, Var):
        return bool(assignment[f.var.index])
    if isinstance(f, Not):
        return not evaluate(f.child, assignment)
    if isinstance(f, And):
        return all(evaluate(c, assignment) for c in f.children)
    if isinstance(f, Or):
        return any(evaluate(c, assignment) for c in f.children)
    if isinstance(f, Implies):
        return (not evaluate(f.left, assignment)) or evaluate(f.right, assignment)
    if isinstance(f, Iff):
        return evaluate(f.left, assignment) == evaluate(f.right, assignment)
    return isinstance(f, ConstTrue)


def evaluate_table(f: Formula, columns: Mapping[int, np.ndarray], rows: int) -> np.ndarray:
    """Evaluate ``f`` on a block of the truth table.

    ``columns`` maps variable index to a boolean column of length ``rows``.
    """
    if isinstance(f, Var):
        return columns[f.var.index]
    if isinstance(f, Not):
        return ~evaluate_table(f.child, columns, rows)
    if isinstance(f, And):
        out = np.ones(rows, dtype=bool)
        for c in f.children:
            out &= evaluate_table(c, columns, rows)
        return out
    if isinstance(f, Or):
        out = np.zeros(rows, dtype=bool)
        for c in f.children:
            out |= evaluate_table(c, columns, rows)
        return out
    if isinstance(f, Implies):
        return ~evaluate_table(f.left, columns, rows) | evaluate_table(f.right, columns, rows)
    if isinstance(f, Iff):
        return evaluate_table(f.left, columns, rows) == evaluate_table(f.right, columns, rows)
    return np.full(rows, isinstance(f, ConstTrue), dtype=bool)


def negate(f: Formula) -> Formula:
    if isinstance(f, Not):
        return f.child
    if isinstance(f, ConstTrue):
        return FALSE
    if isinstance(f, ConstFalse):
        return TRUE
    return Not(f)


def make_and(children) -> Formula:
    """Conjunction with constant folding and flattening."""
    flat: list[Formula] = []
    for c in children:
        if isinstance(c, ConstFalse):
            return FALSE
        if isinstance(c, ConstTrue):
            continue
        if isinstance(c, And):
            flat.extend(c.children)
        else:
            flat.append(c)
    flat = list(dict.fromkeys(flat))
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def make_or(children) -> Formula:
    """Disjunction with constant folding and flattening."""
    flat: list[Formula] = []
    for c in children:
        if isinstance(c, ConstTrue):
            return TRUE
        if isinstance(c, ConstFalse):
            continue
        if isinstance(c, Or):
            flat.extend(c.children)
        else:
            flat.append(c)
    flat = list(dict.fromkeys(flat))
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def condition(f: Formula, values: Mapping[int, bool]) -> Formula:
    """Restrict ``f`` by a partial assignment and fold constants."""
    if isinstance(f, Var):
        if f.var.index in values:
            return TRUE if values[f.var.index] else FALSE
        return f
    if isinstance(f, Not):
        return negate(condition(f.child, values))
    if isinstance(f, And):
        return make_and(condition(c, values) for c in f.children)
    if isinstance(f, Or):
        return make_or(condition(c, values) for c in f.children)
    if isinstance(f, Implies):
        return make_or((negate(condition(f.left, values)), condition(f.right, values)))
    if isinstance(f, Iff):
        left = condition(f.left, values)
        right = condition(f.right, values)
        if isinstance(left, (ConstTrue, ConstFalse)):
            return right if isinstance(left, ConstTrue) else negate(right)
        if isinstance(right, (ConstTrue, ConstFalse)):
            return left if isinstance(right, ConstTrue) else negate(left)
        return Iff(left, right)
    return f


def simplify(f: Formula) -> Formula:
    return condition(f, {})


def literal_of(f: Formula) -> tuple[int, bool] | None:
    """(index, polarity) if ``f`` is a literal, else None."""
    if isinstance(f, Var):
        return f.var.index, True
    if isinstance(f, Not) and isinstance(f.child, Var):
        return f.child.var.index, False
    return None


_PRECEDENCE = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}


def format_formula(f: Formula, parent: int = 0) -> str:
    """Render ``f`` in the expression grammar with minimal parentheses."""
    if isinstance(f, Var):
        return f.var.name
    if isinstance(f, ConstTrue):
        return "true"
    if isinstance(f, ConstFalse):
        return "false"
    prec = _PRECEDENCE[type(f)]
    if isinstance(f, Not):
        text = "!" + format_formula(f.child, prec)
    elif isinstance(f, (And, Or)):
        op = " & " if isinstance(f, And) else " | "
        # n-ary children at equal precedence are parenthesised to keep the tree shape
        text = op.join(format_formula(c, prec + 1) for c in f.children)
    elif isinstance(f, Implies):
        text = f"{format_formula(f.left, prec + 1)} -> {format_formula(f.right, prec)}"
    else:
        text = f"{format_formula(f.left, prec + 1)} <-> {format_formula(f.right, prec + 1)}"
    return f"({text})" if prec < parent else text

"""DIMACS CNF reading and writing.

Variables ``1..V`` are registered as ``x1..xV`` (pool indices ``0..V-1``),
so the pool size always equals the header's variable count.
"""
import re
from typing import Optional, Sequence

from nesyverify.logic.formula import And, Formula, Not, Or, Var, VariablePool
from nesyverify.logic.parser import parse_formula
from nesyverify.utils.errors import DimacsError


def parse_dimacs_clauses(text: str) -> tuple[int, list[list[int]]]:
    """Return (num_vars, clauses) from DIMACS CNF text."""
    num_vars: Optional[int] = None
    num_clauses = 0
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise DimacsError(f"duplicate header at line {lineno}")
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {line!r} at line {lineno}")
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"non-integer header counts at line {lineno}") from None
            if num_vars < 0 or num_clauses < 0:
                raise DimacsError(f"negative header counts at line {lineno}")
            continue
        if num_vars is None:
            raise DimacsError(f"clause before 'p cnf' header at line {lineno}")
        for item in line.split():
            try:
                lit = int(item)
            except ValueError:
                raise DimacsError(f"invalid literal {item!r} at line {lineno}") from None
            if lit == 0:
                clauses.append(current)
                current = []
            elif abs(lit) > num_vars:
                raise DimacsError(
                    f"literal {lit} at line {lineno} exceeds declared variables ({num_vars})"
                )
            else:
                current.append(lit)
    if num_vars is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("last clause is missing its 0 terminator")
    if len(clauses) != num_clauses:
        raise DimacsError(f"header declares {num_clauses} clauses, found {len(clauses)}")
    return num_vars, clauses


def clauses_to_formula(
    num_vars: int, clauses: Sequence[Sequence[int]], pool: Optional[VariablePool] = None
) -> Formula:
    if pool is None:
        pool = VariablePool()
    vars_ = [pool.get_or_create(f"x{i}") for i in range(1, num_vars + 1)]

    def literal(lit: int) -> Formula:
        v = Var(vars_[abs(lit) - 1])
        return v if lit > 0 else Not(v)

    formulas: list[Formula] = []
    for clause in clauses:
        lits = tuple(literal(l) for l in clause)
        formulas.append(lits[0] if len(lits) == 1 else Or(lits))
    if len(formulas) == 1:
        return formulas[0]
    return And(tuple(formulas))


def parse_dimacs(text: str, pool: Optional[VariablePool] = None) -> Formula:
    """Parse DIMACS CNF into an And-of-Or formula.

    An empty clause becomes ``Or(())`` (false); zero clauses become ``And(())`` (true).
    """
    num_vars, clauses = parse_dimacs_clauses(text)
    return clauses_to_formula(num_vars, clauses, pool)


def write_dimacs(num_vars: int, clauses: Sequence[Sequence[int]]) -> str:
    lines = [f"p cnf {num_vars} {len(clauses)}"]
    lines.extend(" ".join(str(l) for l in (*clause, 0)) for clause in clauses)
    return "\n".join(lines) + "\n"


_HEADER = re.compile(r"^\s*p\s+cnf\b", re.MULTILINE)


def looks_like_dimacs(text: str) -> bool:
    """True when ``text`` carries a ``p cnf`` problem line."""
    return _HEADER.search(text) is not None


def parse_any(text: str, pool: Optional[VariablePool] = None) -> Formula:
    """DIMACS CNF when a ``p cnf`` line is present, the expression grammar otherwise."""
    if looks_like_dimacs(text):
        return parse_dimacs(text, pool)
    return parse_formula(text, pool)

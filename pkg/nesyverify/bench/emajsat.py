"""Agreement check between E-MAJSAT and its E-WMC reduction.

For a formula over existential variables x and counting variables y, the
reduction gives every x an interval weight [0, 1], every y the point
weight 1/2, and asks whether the compiled circuit can reach 1/2. Both
sides use inclusive comparisons, so they must agree on every instance.
"""
from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from nesyverify.circuit.evaluate import e_wmc_decide
from nesyverify.compiler import compile_to_circuit
from nesyverify.intervals import Interval
from nesyverify.logic.formula import FALSE, And, Formula, Not, Var, VarId, VariablePool, format_formula, make_or
from nesyverify.logic.oracles import emajsat_brute, random_formula

logger = logging.getLogger(__name__)

MAJORITY_THRESHOLD = 0.5


class EmajsatCase(BaseModel):
    index: int
    formula: str
    n: int
    m: int
    brute: bool
    reduction: bool

    @property
    def agree(self) -> bool:
        return self.brute == self.reduction


class EmajsatSummary(BaseModel):
    seed: Optional[int] = None
    cases: list[EmajsatCase] = Field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.cases)

    @property
    def agreed(self) -> int:
        return sum(c.agree for c in self.cases)

    @property
    def disagreements(self) -> list[EmajsatCase]:
        return [c for c in self.cases if not c.agree]

    @property
    def ok(self) -> bool:
        return self.agreed == self.total


def reduction_decide(
    f: Formula,
    x_vars: Sequence[VarId],
    y_vars: Sequence[VarId],
    max_leaves: Optional[int] = None,
) -> bool:
    """E-WMC side: can some x-weights in [0, 1] push WMC(f) to 1/2 with y-weights 1/2?"""
    num_leaves = max((v.index for v in [*x_vars, *y_vars]), default=-1) + 1
    circuit = compile_to_circuit(f, num_leaves=num_leaves)
    weights = {v: Interval(0.0, 1.0) for v in x_vars}
    weights.update({v: Interval.point(0.5) for v in y_vars})
    return e_wmc_decide(circuit, weights, MAJORITY_THRESHOLD, max_leaves=max_leaves)


def _case(index: int, f: Formula, xs: list[VarId], ys: list[VarId]) -> EmajsatCase:
    return EmajsatCase(
        index=index,
        formula=format_formula(f),
        n=len(xs),
        m=len(ys),
        brute=emajsat_brute(f, xs, ys),
        reduction=reduction_decide(f, xs, ys),
    )


def emajsat_check(
    count: int,
    max_n: int,
    max_m: int,
    seed: int,
    depth: int = 3,
) -> EmajsatSummary:
    """Run both sides on ``count`` random instances drawn from one seeded generator."""
    if count < 1 or max_n < 1 or max_m < 1:
        raise ValueError("count, max_n and max_m must all be >= 1")
    rng = np.random.default_rng(seed)
    summary = EmajsatSummary(seed=seed)
    for i in range(count):
        n = int(rng.integers(1, max_n + 1))
        m = int(rng.integers(1, max_m + 1))
        pool = VariablePool()
        xs = [pool.add(f"x{j + 1}") for j in range(n)]
        ys = [pool.add(f"y{j + 1}") for j in range(m)]
        f = random_formula(rng, xs + ys, depth=depth)
        case = _case(i, f, xs, ys)
        if not case.agree:
            logger.warning(f"Disagreement on case {i}: {case.formula} (brute={case.brute})")
        summary.cases.append(case)
    logger.info(f"E-MAJSAT check: {summary.agreed}/{summary.total} agree")
    return summary


def truth_table_formula(table: int, vars_: Sequence[VarId]) -> Formula:
    """DNF whose models are the rows set in ``table``; row r assigns bit j of r to vars_[j]."""
    terms = []
    for r in range(1 << len(vars_)):
        if table >> r & 1:
            lits = [Var(v) if r >> j & 1 else Not(Var(v)) for j, v in enumerate(vars_)]
            terms.append(And(tuple(lits)))
    return make_or(terms) if terms else FALSE


def exhaustive_two_variable() -> EmajsatSummary:
    """All 16 Boolean functions of one existential and one counting variable."""
    pool = VariablePool()
    x, y = pool.add("x"), pool.add("y")
    summary = EmajsatSummary()
    for table in range(16):
        summary.cases.append(_case(table, truth_table_formula(table, [x, y]), [x], [y]))
    return summary

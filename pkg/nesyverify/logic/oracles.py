"""Brute-force oracles: model counting, weighted model counting, E-MAJSAT.

These enumerate the truth table in blocks of numpy boolean columns and are
the ground truth every compiled artifact is tested against.
"""
from __future__ import annotations

from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from nesyverify.config import config
from nesyverify.intervals import Interval
from nesyverify.logic.formula import (
    And,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Var,
    VarId,
    condition,
    evaluate_table,
    variables,
)
from nesyverify.utils.errors import EnumerationGuardError, PartitionError

_BLOCK_BITS = 16

WeightMap = Mapping[VarId, float]
IntervalWeightMap = Mapping[VarId, Interval]


def check_weight_map(w: WeightMap) -> None:
    for v, p in w.items():
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"Weight of '{v.name}' must lie in [0, 1], got {p}")


def check_interval_weight_map(iw: IntervalWeightMap) -> None:
    for v, iv in iw.items():
        if iv.lo < 0.0 or iv.hi > 1.0:
            raise ValueError(f"Interval weight of '{v.name}' must lie within [0, 1], got {iv}")


def _truth_table_blocks(vars_: Sequence[VarId]) -> Iterator[tuple[int, dict[int, np.ndarray]]]:
    """Yield (rows, columns) blocks covering all 2^n assignments of ``vars_``.

    Row r of the full table assigns bit j of r to ``vars_[j]``.
    """
    n = len(vars_)
    total = 1 << n
    block = min(total, 1 << _BLOCK_BITS)
    for start in range(0, total, block):
        rows = np.arange(start, start + block, dtype=np.int64)
        columns = {v.index: ((rows >> j) & 1).astype(bool) for j, v in enumerate(vars_)}
        yield block, columns


def _free_variables(f: Formula, over: Optional[Sequence[VarId]]) -> list[VarId]:
    if over is None:
        return sorted(variables(f), key=lambda v: v.index)
    missing = set(variables(f)) - set(over)
    if missing:
        names = ", ".join(sorted(v.name for v in missing))
        raise ValueError(f"Formula mentions variables outside the enumeration set: {names}")
    return list(over)


def count_models(
    f: Formula,
    partial: Optional[Mapping[VarId, bool]] = None,
    over: Optional[Sequence[VarId]] = None,
    max_vars: Optional[int] = None,
) -> int:
    """Number of completions of ``partial`` over the remaining variables that satisfy ``f``.

    ``over`` is the full variable set (defaults to the formula's variables);
    variables in ``over`` that ``f`` does not mention still count as free.
    """
    partial = dict(partial or {})
    all_vars = _free_variables(f, over)
    for v in partial:
        if v not in all_vars:
            all_vars.append(v)
    free = [v for v in all_vars if v not in partial]
    limit = config.brute_max_vars if max_vars is None else max_vars
    if len(free) > limit:
        raise EnumerationGuardError("free variable count", len(free), limit)
    restricted = condition(f, {v.index: bool(b) for v, b in partial.items()})
    count = 0
    for rows, columns in _truth_table_blocks(free):
        count += int(np.count_nonzero(evaluate_table(restricted, columns, rows)))
    return count


def wmc_brute(
    f: Formula,
    w: WeightMap,
    over: Optional[Sequence[VarId]] = None,
    max_vars: Optional[int] = None,
) -> float:
    """Sum over satisfying assignments of the product of literal weights."""
    check_weight_map(w)
    vars_ = _free_variables(f, over)
    missing = [v.name for v in vars_ if v not in w]
    if missing:
        raise ValueError(f"Missing weights for: {', '.join(missing)}")
    limit = config.brute_max_vars if max_vars is None else max_vars
    if len(vars_) > limit:
        raise EnumerationGuardError("variable count", len(vars_), limit)
    total = 0.0
    for rows, columns in _truth_table_blocks(vars_):
        sat = evaluate_table(f, columns, rows)
        if not sat.any():
            continue
        mass = np.ones(rows)
        for v in vars_:
            p = w[v]
            mass *= np.where(columns[v.index], p, 1.0 - p)
        total += float(mass[sat].sum())
    return total


def _check_partition(f: Formula, x_vars: Sequence[VarId], y_vars: Sequence[VarId]) -> None:
    xs, ys = set(x_vars), set(y_vars)
    if len(xs) != len(x_vars) or len(ys) != len(y_vars):
        raise PartitionError("variable lists contain duplicates")
    if xs & ys:
        names = ", ".join(sorted(v.name for v in xs & ys))
        raise PartitionError(f"variables in both lists: {names}")
    outside = set(variables(f)) - xs - ys
    if outside:
        names = ", ".join(sorted(v.name for v in outside))
        raise PartitionError(f"formula variables not covered by the partition: {names}")


def restricted_counts(
    f: Formula,
    x_vars: Sequence[VarId],
    y_vars: Sequence[VarId],
    max_vars: Optional[int] = None,
) -> np.ndarray:
    """#f|x for every x-assignment; entry r assigns bit j of r to ``x_vars[j]``."""
    _check_partition(f, x_vars, y_vars)
    limit = config.emajsat_max_vars if max_vars is None else max_vars
    n, m = len(x_vars), len(y_vars)
    if n + m > limit:
        raise EnumerationGuardError("E-MAJSAT variable count", n + m, limit)
    # x varies fastest: row = x_bits + (y_bits << n)
    counts = np.zeros(1 << n, dtype=np.int64)
    for block_start, (rows, columns) in zip(
        range(0, 1 << (n + m), 1 << min(n + m, _BLOCK_BITS)),
        _truth_table_blocks(list(x_vars) + list(y_vars)),
    ):
        sat = evaluate_table(f, columns, rows)
        x_index = (np.arange(block_start, block_start + rows) & ((1 << n) - 1))
        counts += np.bincount(x_index[sat], minlength=1 << n)
    return counts


def emajsat_brute(
    f: Formula,
    x_vars: Sequence[VarId],
    y_vars: Sequence[VarId],
    max_vars: Optional[int] = None,
) -> bool:
    """True iff some x-assignment satisfies at least half of the y-assignments."""
    counts = restricted_counts(f, x_vars, y_vars, max_vars=max_vars)
    # inclusive: #f|x >= 2^m / 2, i.e. 2 * #f|x >= 2^m
    return bool((2 * counts >= (1 << len(y_vars))).any())


def wmc_partial(
    f: Formula,
    w: WeightMap,
    x_vars: Sequence[VarId],
    y_vars: Sequence[VarId],
    max_vars: Optional[int] = None,
) -> float:
    """WMC as a sum over sets of worlds, one set per x-assignment.

    Σ_x p(x) · WMC(f|x over y). When every y weight is 1/2 the inner term is
    #f|x / 2^m.
    """
    _check_partition(f, x_vars, y_vars)
    check_weight_map(w)
    limit = config.emajsat_max_vars if max_vars is None else max_vars
    if len(x_vars) + len(y_vars) > limit:
        raise EnumerationGuardError("variable count", len(x_vars) + len(y_vars), limit)
    total = 0.0
    for rows, columns in _truth_table_blocks(x_vars):
        for r in range(rows):
            assignment = {v.index: bool(columns[v.index][r]) for v in x_vars}
            p_x = 1.0
            for v in x_vars:
                p_x *= w[v] if assignment[v.index] else 1.0 - w[v]
            if p_x == 0.0:
                continue
            restricted = condition(f, assignment)
            total += p_x * wmc_brute(restricted, w, over=list(y_vars), max_vars=limit)
    return total


def random_formula(
    rng: np.random.Generator,
    vars_: Sequence[VarId],
    depth: int = 3,
    use_all: bool = False,
) -> Formula:
    """Random formula over ``vars_``.

    With ``use_all`` the result is conjoined with a tautology per unused
    variable so every variable is mentioned without changing the models.
    """
    def build(d: int) -> Formula:
        if d == 0 or rng.random() < 0.2:
            v = Var(vars_[int(rng.integers(len(vars_)))])
            return Not(v) if rng.random() < 0.5 else v
        kind = int(rng.integers(5))
        if kind == 0:
            return Not(build(d - 1))
        if kind == 1:
            return And(tuple(build(d - 1) for _ in range(int(rng.integers(2, 4)))))
        if kind == 2:
            return Or(tuple(build(d - 1) for _ in range(int(rng.integers(2, 4)))))
        if kind == 3:
            return Implies(build(d - 1), build(d - 1))
        return Iff(build(d - 1), build(d - 1))

    f = build(depth)
    if use_all:
        unused = [v for v in vars_ if v not in set(variables(f))]
        if unused:
            f = And((f, *(Or((Var(v), Not(Var(v)))) for v in unused)))
    return f


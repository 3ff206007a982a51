"""Circuits and formulas for the benchmark tasks.

The digit-sum circuit is built directly by convolution rather than by
compiling a Boolean encoding; ``sum_formula`` provides that encoding for
cross-checking on small instances.
"""
import itertools
from typing import Optional

from nesyverify.circuit.model import Circuit, CircuitBuilder
from nesyverify.config import config
from nesyverify.logic.formula import And, Formula, Not, Or, Var, VariablePool
from nesyverify.logic.parser import parse_formula
from nesyverify.utils.errors import EnumerationGuardError

DRIVING_CONSTRAINTS = "((red_light | car_in_front) -> brake) & (accelerate <-> !brake)"


def build_sum_circuit(
    num_digits: int, num_classes: int, max_digits: Optional[int] = None
) -> Circuit:
    """Circuit whose output ``s`` is P(sum of digits = s).

    Leaf ``d * num_classes + c`` holds P(digit d = c). Built by the
    recurrence P_k(s) = sum_c leaf[k][c] * P_{k-1}(s - c).
    """
    if num_digits < 1:
        raise ValueError(f"num_digits must be >= 1, got {num_digits}")
    if num_classes < 2:
        raise ValueError(f"num_classes must be >= 2, got {num_classes}")
    limit = config.sum_max_digits if max_digits is None else max_digits
    if num_digits > limit:
        raise EnumerationGuardError("sum circuit digit count", num_digits, limit)

    b = CircuitBuilder(num_digits * num_classes)
    leaves = [[b.leaf(d * num_classes + c) for c in range(num_classes)] for d in range(num_digits)]
    partial = list(leaves[0])
    for k in range(1, num_digits):
        nxt: list[int] = []
        max_sum = (k + 1) * (num_classes - 1)
        for s in range(max_sum + 1):
            terms = [
                b.mul((leaves[k][c], partial[s - c]))
                for c in range(num_classes)
                if 0 <= s - c < len(partial)
            ]
            nxt.append(b.add(terms))
        partial = nxt
    return b.build(partial)


def sum_formula(
    num_digits: int, num_classes: int, pool: VariablePool
) -> tuple[Formula, list[Formula]]:
    """Boolean encoding of the digit-sum task.

    Returns (exactly-one constraint over the indicators ``d<k>_<c>``,
    per-sum formulas). Indicator ``d<k>_<c>`` gets pool index
    ``k * num_classes + c`` when ``pool`` starts empty, matching the sum
    circuit's leaf layout.
    """
    ind = [
        [Var(pool.get_or_create(f"d{k}_{c}")) for c in range(num_classes)]
        for k in range(num_digits)
    ]
    constraints: list[Formula] = []
    for row in ind:
        constraints.append(Or(tuple(row)))
        for a, b in itertools.combinations(row, 2):
            constraints.append(Not(And((a, b))))
    exactly_one = And(tuple(constraints))
    by_sum: dict[int, list[Formula]] = {}
    for combo in itertools.product(range(num_classes), repeat=num_digits):
        world = And(tuple(ind[k][c] for k, c in enumerate(combo)))
        by_sum.setdefault(sum(combo), []).append(world)
    sums = [Or(tuple(by_sum[s])) for s in range(num_digits * (num_classes - 1) + 1)]
    return exactly_one, sums


def driving_formula(pool: Optional[VariablePool] = None) -> Formula:
    """The red-light / car-in-front / brake / accelerate constraint pair."""
    return parse_formula(DRIVING_CONSTRAINTS, pool)

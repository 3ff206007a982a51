"""Formula text to arithmetic circuit, with a brute-force self-check."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from nesyverify.circuit.evaluate import evaluate
from nesyverify.circuit.model import Circuit
from nesyverify.compiler.arith import to_arith_circuit
from nesyverify.compiler.dnnf import DecisionDnnf, compile_formula, smooth
from nesyverify.logic.dimacs import parse_any
from nesyverify.logic.formula import Formula, VariablePool
from nesyverify.logic.oracles import wmc_brute
from nesyverify.utils.errors import CompileError

logger = logging.getLogger(__name__)

SELF_CHECK_MAX_VARS = 20


@dataclass
class CompiledFormula:
    formula: Formula
    pool: VariablePool
    dnnf: DecisionDnnf
    circuit: Circuit
    # (circuit value, brute-force WMC) with every weight at 1/2
    self_check: Optional[tuple[float, float]] = None

    @property
    def unsatisfiable(self) -> bool:
        return self.dnnf.is_false()

    @property
    def self_check_ok(self) -> Optional[bool]:
        if self.self_check is None:
            return None
        got, want = self.self_check
        return abs(got - want) <= 1e-12


def compile_text(
    text: str,
    order: Optional[Sequence[str]] = None,
    check_max_vars: int = SELF_CHECK_MAX_VARS,
) -> CompiledFormula:
    """Parse (expression or DIMACS), compile, smooth and translate ``text``.

    Leaf ``i`` is pool variable ``i``; DIMACS variables that no clause
    mentions still get a leaf. ``order`` names variables; it defaults to
    first appearance.
    """
    pool = VariablePool()
    f = parse_any(text, pool)
    var_order = None
    if order is not None:
        unknown = [name for name in order if name not in pool]
        if unknown:
            raise CompileError(f"order names unknown variables: {', '.join(unknown)}")
        var_order = [pool[name] for name in order]
    d = smooth(compile_formula(f, var_order))
    circuit = to_arith_circuit(d, num_leaves=len(pool))
    result = CompiledFormula(f, pool, d, circuit)
    if result.unsatisfiable:
        logger.warning("Formula is unsatisfiable; the circuit evaluates to 0")
    if len(pool) <= check_max_vars:
        half = {v: 0.5 for v in pool}
        result.self_check = (
            evaluate(circuit, [0.5] * len(pool))[0],
            wmc_brute(f, half, over=pool.variables),
        )
    logger.info(
        f"Compiled {len(pool)} variables into {circuit.num_nodes} circuit nodes "
        f"({d.size} d-DNNF nodes)"
    )
    return result

"""Knowledge compilation: formulas to smooth decision-DNNF to arithmetic circuits."""
from nesyverify.compiler.arith import emit_arith, to_arith_circuit
from nesyverify.compiler.dnnf import (
    CompileCache,
    Compiler,
    DecisionDnnf,
    DnnfGraph,
    DnnfKind,
    DnnfNode,
    compile_formula,
    smooth,
)
from nesyverify.compiler.pipeline import CompiledFormula, compile_text
from nesyverify.compiler.tasks import build_sum_circuit, driving_formula, sum_formula


def compile_to_circuit(f, order=None, num_leaves=None):
    """compile -> smooth -> NAT translation in one call."""
    return to_arith_circuit(smooth(compile_formula(f, order)), num_leaves=num_leaves)

"""Arithmetic circuits: structure, text format and evaluators."""
from nesyverify.circuit.evaluate import (
    e_wmc_decide,
    evaluate,
    evaluate_batch,
    evaluate_interval,
    vertex_bounds,
)
from nesyverify.circuit.io import dumps_circuit, loads_circuit, read_circuit, write_circuit
from nesyverify.circuit.model import (
    Circuit,
    CircuitBuilder,
    CircuitNode,
    LeafBounds,
    NodeKind,
    circuit_stats,
    validate,
)

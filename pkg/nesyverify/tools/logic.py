"""Formula compilation and weighted model counting tools."""
import json
from typing import Optional

from mcp.server.fastmcp import FastMCP
from pydantic import BaseModel, ConfigDict, Field, field_validator

from nesyverify.circuit.evaluate import evaluate
from nesyverify.circuit.io import dumps_circuit
from nesyverify.circuit.model import circuit_stats
from nesyverify.compiler.pipeline import compile_text
from nesyverify.config import config
from nesyverify.logic.oracles import count_models, wmc_brute
from nesyverify.utils.errors import handle_error
from nesyverify.utils.formatting import ResponseFormat, format_circuit_stats

MAX_CIRCUIT_TEXT_NODES = 400


class CompileFormulaInput(BaseModel):
    model_config = ConfigDict(str_strip_whitespace=True)
    formula: str = Field(
        ...,
        description="Formula in the expression grammar (! & | -> <->) or DIMACS CNF with a 'p cnf' header",
        min_length=1,
        max_length=200_000,
    )
    order: Optional[list[str]] = Field(
        default=None, description="Variable names in branching order (default: first appearance)"
    )
    include_circuit: bool = Field(
        default=True, description=f"Append the circuit text when it has at most {MAX_CIRCUIT_TEXT_NODES} nodes"
    )
    response_format: ResponseFormat = Field(default=ResponseFormat.MARKDOWN)


class WeightedModelCountInput(BaseModel):
    model_config = ConfigDict(str_strip_whitespace=True)
    formula: str = Field(..., description="Formula text or DIMACS CNF", min_length=1, max_length=200_000)
    weights: dict[str, float] = Field(
        ..., description="Probability of each variable being true, keyed by variable name"
    )
    response_format: ResponseFormat = Field(default=ResponseFormat.MARKDOWN)

    @field_validator("weights")
    @classmethod
    def validate_probabilities(cls, v: dict[str, float]) -> dict[str, float]:
        for name, p in v.items():
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"Weight of '{name}' must lie in [0, 1], got {p}")
        return v


def register_logic_tools(mcp: FastMCP):

    @mcp.tool(
        name="nesy_compile_formula",
        annotations={
            "title": "Compile Formula to Arithmetic Circuit",
            "readOnlyHint": True,
            "destructiveHint": False,
            "idempotentHint": True,
            "openWorldHint": False,
        },
    )
    async def nesy_compile_formula(params: CompileFormulaInput) -> str:
        """Compile a propositional formula into a smooth decision-DNNF and its arithmetic circuit.

        Returns circuit statistics, a weighted-model-count self-check against
        brute-force enumeration (all weights 1/2, up to 20 variables) and,
        for small circuits, the circuit in text form.
        """
        try:
            compiled = compile_text(params.formula, params.order)
            stats = circuit_stats(compiled.circuit)
            if params.response_format == ResponseFormat.JSON:
                payload = {
                    "variables": compiled.pool.names,
                    "stats": stats,
                    "unsatisfiable": compiled.unsatisfiable,
                    "self_check": compiled.self_check,
                }
                if params.include_circuit and compiled.circuit.num_nodes <= MAX_CIRCUIT_TEXT_NODES:
                    payload["circuit"] = dumps_circuit(compiled.circuit)
                return json.dumps(payload, indent=2)

            lines = [format_circuit_stats(stats, title="Compiled circuit")]
            lines.append(f"- **Leaves** map to: {', '.join(compiled.pool.names) or '(none)'}")
            if compiled.unsatisfiable:
                lines.append("\n**Warning**: the formula is unsatisfiable; the circuit evaluates to 0.")
            if compiled.self_check is not None:
                got, want = compiled.self_check
                verdict = "ok" if compiled.self_check_ok else "MISMATCH"
                lines.append(f"\nSelf-check: WMC(0.5-weights) = {got:.12g} (brute force {want:.12g}, {verdict})")
            if params.include_circuit and compiled.circuit.num_nodes <= MAX_CIRCUIT_TEXT_NODES:
                lines.append("\n```\n" + dumps_circuit(compiled.circuit) + "```")
            return "\n".join(lines)
        except Exception as e:
            return handle_error(e)

    @mcp.tool(
        name="nesy_weighted_model_count",
        annotations={
            "title": "Weighted Model Count",
            "readOnlyHint": True,
            "destructiveHint": False,
            "idempotentHint": True,
            "openWorldHint": False,
        },
    )
    async def nesy_weighted_model_count(params: WeightedModelCountInput) -> str:
        """Compute the probability that a formula holds under independent variable weights.

        Evaluates the compiled circuit and, within the brute-force guard,
        cross-checks it against truth-table enumeration. Also reports the
        model count.
        """
        try:
            compiled = compile_text(params.formula, check_max_vars=0)
            pool = compiled.pool
            missing = [name for name in pool.names if name not in params.weights]
            if missing:
                return f"Error: missing weights for: {', '.join(missing)}"
            unknown = sorted(set(params.weights) - set(pool.names))
            if unknown:
                return f"Error: weights given for unknown variables: {', '.join(unknown)}"
            leaf = [params.weights[name] for name in pool.names]
            circuit_value = evaluate(compiled.circuit, leaf)[0]
            models = compiled.dnnf.model_count(len(pool))
            brute = None
            if len(pool) <= config.brute_max_vars:
                brute = wmc_brute(
                    compiled.formula, {v: params.weights[v.name] for v in pool}, over=pool.variables
                )
                models = count_models(compiled.formula, over=pool.variables)
            result = {
                "variables": len(pool),
                "circuit_wmc": circuit_value,
                "brute_force_wmc": brute,
                "model_count": models,
            }
            if params.response_format == ResponseFormat.JSON:
                return json.dumps(result, indent=2)
            lines = ["## Weighted model count\n"]
            lines.append(f"- **P(formula)** (circuit): {circuit_value:.12g}")
            if brute is not None:
                lines.append(f"- **Brute force**: {brute:.12g} (difference {abs(brute - circuit_value):.3g})")
            else:
                lines.append(f"- **Brute force**: skipped ({len(pool)} variables > {config.brute_max_vars})")
            lines.append(f"- **Models**: {models} of 2^{len(pool)}")
            return "\n".join(lines)
        except Exception as e:
            return handle_error(e)

"""Circuit bounding and reduction-check tools."""
import asyncio

from mcp.server.fastmcp import FastMCP
from pydantic import BaseModel, ConfigDict, Field, field_validator

from nesyverify.bench.emajsat import emajsat_check, exhaustive_two_variable
from nesyverify.circuit.evaluate import evaluate_interval, free_leaves, vertex_bounds
from nesyverify.circuit.io import loads_circuit
from nesyverify.config import config
from nesyverify.intervals import Interval
from nesyverify.utils.errors import handle_error
from nesyverify.utils.formatting import ResponseFormat, format_bounds, format_emajsat_summary


class CircuitBoundsInput(BaseModel):
    model_config = ConfigDict(str_strip_whitespace=True)
    circuit: str = Field(..., description="Circuit in text form (header 'ac L N O')", min_length=1)
    leaf_bounds: list[tuple[float, float]] = Field(
        ..., description="One [lo, hi] interval within [0, 1] per circuit leaf"
    )
    exact: bool = Field(
        default=True, description="Also compute the exact range by vertex enumeration when within the guard"
    )
    response_format: ResponseFormat = Field(default=ResponseFormat.MARKDOWN)

    @field_validator("leaf_bounds")
    @classmethod
    def validate_intervals(cls, v: list[tuple[float, float]]) -> list[tuple[float, float]]:
        for i, (lo, hi) in enumerate(v):
            if not 0.0 <= lo <= hi <= 1.0:
                raise ValueError(f"Leaf {i}: need 0 <= lo <= hi <= 1, got [{lo}, {hi}]")
        return v


class EmajsatCheckInput(BaseModel):
    count: int = Field(default=200, description="Number of random instances", ge=1, le=2000)
    max_n: int = Field(default=4, description="Maximum existential variables", ge=1, le=8)
    max_m: int = Field(default=6, description="Maximum counting variables", ge=1, le=10)
    seed: int = Field(default=0, description="Generator seed")
    exhaustive: bool = Field(default=False, description="Also sweep all 16 one-plus-one variable functions")
    response_format: ResponseFormat = Field(default=ResponseFormat.MARKDOWN)


def register_circuit_tools(mcp: FastMCP):

    @mcp.tool(
        name="nesy_circuit_bounds",
        annotations={
            "title": "Bound Circuit Outputs over a Leaf Box",
            "readOnlyHint": True,
            "destructiveHint": False,
            "idempotentHint": True,
            "openWorldHint": False,
        },
    )
    async def nesy_circuit_bounds(params: CircuitBoundsInput) -> str:
        """Bound every circuit output when each leaf ranges over an interval.

        The relaxed bound uses interval arithmetic (sound, possibly loose).
        The exact bound enumerates the box's vertices, which is exact for
        multilinear circuits such as compiled formulas; it is skipped when
        more than NESY_VERTEX_MAX_LEAVES leaves are non-degenerate.
        """
        try:
            circuit = loads_circuit(params.circuit)
            bounds = [Interval(lo, hi) for lo, hi in params.leaf_bounds]
            relaxed = evaluate_interval(circuit, bounds)
            exact = None
            note = ""
            if params.exact:
                free = len(free_leaves(circuit, bounds))
                if free <= config.vertex_max_leaves:
                    exact = vertex_bounds(circuit, bounds)
                else:
                    note = f"\n\n_Exact bounds skipped: {free} free leaves exceed the limit of {config.vertex_max_leaves}._"
            text = format_bounds(relaxed, exact, params.response_format)
            return text if params.response_format == ResponseFormat.JSON else text + note
        except Exception as e:
            return handle_error(e)

    @mcp.tool(
        name="nesy_emajsat_check",
        annotations={
            "title": "Check the E-MAJSAT to E-WMC Reduction",
            "readOnlyHint": True,
            "destructiveHint": False,
            "idempotentHint": True,
            "openWorldHint": False,
        },
    )
    async def nesy_emajsat_check(params: EmajsatCheckInput) -> str:
        """Compare brute-force E-MAJSAT with the threshold-1/2 E-WMC decision on random formulas.

        Existential variables get interval weight [0, 1], counting variables
        the point weight 1/2; both sides must agree on every instance.
        """
        try:
            summary = await asyncio.to_thread(
                emajsat_check, params.count, params.max_n, params.max_m, params.seed
            )
            text = format_emajsat_summary(summary, params.response_format)
            if params.exhaustive:
                sweep = await asyncio.to_thread(exhaustive_two_variable)
                text += "\n\nExhaustive two-variable sweep:\n" + format_emajsat_summary(sweep, params.response_format)
            return text
        except Exception as e:
            return handle_error(e)

"""Reusable prompt templates for common verification workflows."""
from mcp.server.fastmcp import FastMCP


def register_prompts(mcp: FastMCP):

    @mcp.prompt("nesy_verification_workflow")
    async def verification_workflow() -> str:
        """Step-by-step guide from logical constraints to a robustness verdict."""
        return """You are verifying a neuro-symbolic system: neural networks whose output probabilities feed a circuit compiled from logical constraints. Follow these steps:

1. **Compile the constraints**: Call nesy_compile_formula with the formula text
   - Check that the self-check line reports "ok"
   - An unsatisfiable formula compiles to a circuit that is always 0
2. **Sanity-check probabilities**: Call nesy_weighted_model_count with concrete weights
   - The circuit value and the brute-force value must agree
3. **Bound the circuit**: Call nesy_circuit_bounds with one [lo, hi] interval per leaf
   - The exact bound is never wider than the relaxed one; a large gap means the relaxation is loose
4. **Verify the system**: Call nesy_verify_system with the manifest, the dataset and an eps list
   - Robustness % should not increase as eps grows
   - Use method="both" to compare relaxed and exact circuit bounds

Verdicts are "robust" or "unknown". "unknown" never means the system is unsafe: bound propagation is sound but incomplete."""

    @mcp.prompt("nesy_reduction_check")
    async def reduction_check() -> str:
        """Guide for validating the exact bounding method against E-MAJSAT."""
        return """You are validating exact circuit bounding against a brute-force oracle.

1. Call nesy_emajsat_check with count=200, max_n=4, max_m=6 and a fixed seed
2. Repeat with exhaustive=true to cover all 16 one-plus-one variable functions
3. Any disagreement is a bug: report the formula, n and m from the summary

Rules:
- Existential variables get weight interval [0, 1], counting variables weight 1/2
- The threshold is 1/2 and both sides compare inclusively"""

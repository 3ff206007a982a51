"""End-to-end system verification tool."""
import asyncio
from typing import Literal, Optional

from mcp.server.fastmcp import FastMCP
from pydantic import BaseModel, ConfigDict, Field, field_validator

from nesyverify.utils.errors import handle_error
from nesyverify.utils.formatting import ResponseFormat, format_verification_summary
from nesyverify.verifier.dataset import load_dataset_npz
from nesyverify.verifier.manifest import load_system
from nesyverify.verifier.verify import verify_dataset


class VerifySystemInput(BaseModel):
    model_config = ConfigDict(str_strip_whitespace=True)
    manifest_path: str = Field(..., description="Path to a nesy-system/1 manifest", min_length=1)
    dataset_path: str = Field(
        ..., description="Path to an .npz file with one array per system input and optional 'labels'", min_length=1
    )
    eps: list[float] = Field(
        default_factory=lambda: [1e-4, 1e-3, 1e-2],
        description="Perturbation radii (l-infinity)",
        min_length=1,
        max_length=20,
    )
    method: Literal["relaxed", "exact", "both"] = Field(
        default="relaxed", description="Circuit bounding method"
    )
    threads: Optional[int] = Field(default=None, description="Worker threads (default NESY_THREADS)", ge=1, le=64)
    response_format: ResponseFormat = Field(default=ResponseFormat.MARKDOWN)

    @field_validator("eps")
    @classmethod
    def validate_eps(cls, v: list[float]) -> list[float]:
        if any(e < 0 for e in v):
            raise ValueError("eps values must be >= 0")
        return v


def register_verification_tools(mcp: FastMCP):

    @mcp.tool(
        name="nesy_verify_system",
        annotations={
            "title": "Verify NeSy System Robustness",
            "readOnlyHint": True,
            "destructiveHint": False,
            "idempotentHint": True,
            "openWorldHint": False,
        },
    )
    async def nesy_verify_system(params: VerifySystemInput) -> str:
        """Verify a system described by a manifest on a dataset, for each eps.

        Network bounds come from interval bound propagation; circuit bounds
        from interval arithmetic (relaxed) and/or vertex enumeration (exact).
        Returns one summary row per eps and method: robustness %, mean bounds
        of the decisive output and mean runtime per sample.
        """
        try:
            sys, query = load_system(params.manifest_path)
            ds = load_dataset_npz(params.dataset_path, sys.input_names)
            methods = ["relaxed", "exact"] if params.method == "both" else [params.method]
            reports = []
            for eps in params.eps:
                for method in methods:
                    reports.append(
                        await asyncio.to_thread(
                            verify_dataset, sys, ds, eps, query.to_mode(), method, params.threads
                        )
                    )
            return format_verification_summary(reports, params.response_format)
        except Exception as e:
            return handle_error(e)

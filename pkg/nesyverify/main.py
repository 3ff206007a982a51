"""NeSy verifier MCP server: main entry point.

5 tools, 2 prompts, tool-level governance.
"""
import logging
from contextlib import asynccontextmanager
from typing import Optional

from mcp.server.fastmcp import FastMCP
from starlette.responses import JSONResponse
from starlette.routing import Route

from nesyverify import __version__
from nesyverify.config import config
from nesyverify.governance.policy import build_governance_policy

logging.basicConfig(level=config.log_level)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def app_lifespan(server: FastMCP):
    logger.info(
        f"NeSy verifier MCP server started (threads={config.threads}, "
        f"vertex guard={config.vertex_max_leaves} leaves)"
    )
    yield {}
    logger.info("NeSy verifier MCP server stopped")


mcp = FastMCP(
    "nesy_verify",
    lifespan=app_lifespan,
    stateless_http=True,
    host="0.0.0.0",
    port=config.app_port,
)

governance = build_governance_policy()

from nesyverify.prompts.templates import register_prompts
from nesyverify.tools.circuits import register_circuit_tools
from nesyverify.tools.logic import register_logic_tools
from nesyverify.tools.verification import register_verification_tools

register_logic_tools(mcp)
register_circuit_tools(mcp)
register_verification_tools(mcp)
register_prompts(mcp)


def _apply_tool_governance(mcp_instance: FastMCP):
    """Wrap ToolManager.call_tool so every invocation is checked against the policy.

    Only active when NESY_TOOL_* variables restrict the tool set.
    """
    if not governance.tool_policy.active:
        logger.info("Tool-level governance: inactive (no tool restrictions configured)")
        return

    original_call_tool = mcp_instance._tool_manager.call_tool

    async def governed_call_tool(name, arguments, context=None, convert_result=False):
        allowed, error_msg = governance.check_tool_access(name)
        if not allowed:
            return [{"type": "text", "text": f"Error: {error_msg}"}]
        return await original_call_tool(name, arguments, context, convert_result)

    mcp_instance._tool_manager.call_tool = governed_call_tool
    logger.info(
        f"Tool-level governance: active "
        f"(allow={len(governance.tool_policy.allowed_tools)}, "
        f"deny={len(governance.tool_policy.denied_tools)})"
    )


_apply_tool_governance(mcp)


async def _health(request):
    return JSONResponse({"status": "ok", "service": "nesy-verify", "version": __version__})


def serve(transport: str = "streamable-http", port: Optional[int] = None):
    """Run the server over stdio or streamable HTTP (with / and /health routes)."""
    import uvicorn
    from starlette.applications import Starlette
    from starlette.middleware import Middleware
    from starlette.middleware.cors import CORSMiddleware as StarletteCORS

    if transport == "stdio":
        mcp.run(transport="stdio")
        return

    try:
        mcp_app = mcp.streamable_http_app()
    except AttributeError:
        logger.warning("FastMCP.streamable_http_app() not available, using mcp.run()")
        mcp.run(transport="streamable-http")
        return

    app = Starlette(
        routes=[
            Route("/", _health),
            Route("/health", _health),
        ],
        middleware=[
            Middleware(
                StarletteCORS,
                allow_origins=["*"],
                allow_methods=["*"],
                allow_headers=["*"],
            ),
        ],
    )
    app.mount("/mcp", mcp_app)

    uvicorn.run(app, host="0.0.0.0", port=port or config.app_port)


def main():
    import argparse

    parser = argparse.ArgumentParser(description="NeSy verifier MCP server")
    parser.add_argument(
        "--transport",
        choices=["stdio", "streamable-http"],
        default="streamable-http",
        help="MCP transport protocol (default: streamable-http)",
    )
    args = parser.parse_args()
    serve(args.transport)


if __name__ == "__main__":
    main()

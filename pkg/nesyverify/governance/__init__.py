"""Governance for the NeSy verifier MCP server.

Tool-level access control: per-tool allow/deny lists with pre-built
profiles, resolved from NESY_TOOL_* env vars.
"""

"""Governance policy loaded from environment variables."""
import logging
import os
from dataclasses import dataclass
from typing import Optional

from nesyverify.governance.tool_guard import ToolAccessPolicy, resolve_tool_policy

logger = logging.getLogger(__name__)


@dataclass
class GovernancePolicy:
    """Runtime enforcement object consulted before every tool call."""

    tool_policy: ToolAccessPolicy

    def check_tool_access(self, tool_name: str) -> tuple[bool, str]:
        """Check if a tool is accessible. Returns (allowed, error_msg)."""
        if self.tool_policy.is_tool_allowed(tool_name):
            return True, ""
        return False, (
            f"Tool '{tool_name}' is not permitted by the current governance policy. "
            f"Adjust NESY_TOOL_PROFILE / NESY_TOOL_ALLOWED / NESY_TOOL_DENIED to enable it."
        )


def _parse_env_list(env_var: str) -> Optional[list[str]]:
    """Parse comma-separated env var into list. Returns None if unset."""
    val = os.environ.get(env_var, "").strip()
    if not val:
        return None
    return [item.strip() for item in val.split(",") if item.strip()]


def build_governance_policy() -> GovernancePolicy:
    """Resolve the tool policy from NESY_TOOL_* env vars; no variables means all tools allowed."""
    policy = resolve_tool_policy(
        profile=os.environ.get("NESY_TOOL_PROFILE", "").strip() or None,
        allowed_categories=_parse_env_list("NESY_TOOL_ALLOWED_CATEGORIES"),
        denied_categories=_parse_env_list("NESY_TOOL_DENIED_CATEGORIES"),
        allowed_tools=_parse_env_list("NESY_TOOL_ALLOWED"),
        denied_tools=_parse_env_list("NESY_TOOL_DENIED"),
    )
    logger.info(
        f"Governance: allow={len(policy.allowed_tools) or 'all'}, deny={len(policy.denied_tools)}"
    )
    return GovernancePolicy(tool_policy=policy)

"""Tool-level access control with allow/deny lists.

Enforces per-tool permissions before tool function execution.
Configurable via NESY_TOOL_* env vars.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

logger = logging.getLogger(__name__)


# Tool categories for bulk allow/deny
TOOL_CATEGORIES: dict[str, list[str]] = {
    "logic": [
        "nesy_compile_formula",
        "nesy_weighted_model_count",
    ],
    "bounds": [
        "nesy_circuit_bounds",
    ],
    "oracle": [
        "nesy_emajsat_check",
    ],
    "verification": [
        "nesy_verify_system",
    ],
}

# Pre-built tool profiles. "explore" keeps to in-memory computations;
# verification reads manifests, weights and datasets from disk.
TOOL_PROFILES: dict[str, list[str]] = {
    "explore": ["logic", "bounds", "oracle"],
    "full": list(TOOL_CATEGORIES.keys()),
}


@dataclass
class ToolAccessPolicy:
    """Resolved tool access policy."""

    allowed_tools: set[str] = field(default_factory=set)
    denied_tools: set[str] = field(default_factory=set)

    def is_tool_allowed(self, tool_name: str) -> bool:
        """Check if a specific tool is allowed.

        1. Tool in a non-empty deny list -> DENIED
        2. Non-empty allow list without the tool -> DENIED
        3. Otherwise -> ALLOWED
        """
        if self.denied_tools and tool_name in self.denied_tools:
            return False
        if self.allowed_tools and tool_name not in self.allowed_tools:
            return False
        return True

    @property
    def active(self) -> bool:
        return bool(self.allowed_tools or self.denied_tools)


def resolve_tool_policy(
    profile: Optional[str] = None,
    allowed_categories: Optional[list[str]] = None,
    denied_categories: Optional[list[str]] = None,
    allowed_tools: Optional[list[str]] = None,
    denied_tools: Optional[list[str]] = None,
) -> ToolAccessPolicy:
    """Resolve a tool access policy from profile + overrides.

    Later steps add to earlier ones:
    1. Profile expands to its categories' tools
    2. allowed_categories / denied_categories
    3. allowed_tools / denied_tools (individual tool names)
    """
    policy = ToolAccessPolicy()

    if profile:
        if profile not in TOOL_PROFILES:
            logger.warning(f"Unknown tool profile '{profile}' ignored; known: {sorted(TOOL_PROFILES)}")
        else:
            for cat in TOOL_PROFILES[profile]:
                policy.allowed_tools.update(TOOL_CATEGORIES[cat])

    for cat in allowed_categories or []:
        if cat in TOOL_CATEGORIES:
            policy.allowed_tools.update(TOOL_CATEGORIES[cat])

    for cat in denied_categories or []:
        if cat in TOOL_CATEGORIES:
            policy.denied_tools.update(TOOL_CATEGORIES[cat])

    if allowed_tools:
        policy.allowed_tools.update(allowed_tools)

    if denied_tools:
        policy.denied_tools.update(denied_tools)

    return policy

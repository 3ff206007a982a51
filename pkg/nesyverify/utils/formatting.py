"""Response formatting helpers."""
import json
from enum import Enum
from typing import Any, Optional, Sequence

from nesyverify.intervals import Interval


class ResponseFormat(str, Enum):
    MARKDOWN = "markdown"
    JSON = "json"


def _num(value: Optional[float], fmt: str = ".6g") -> str:
    return "-" if value is None else format(value, fmt)


def markdown_table(rows: Sequence[dict], columns: Sequence[str], limit: int = 50) -> str:
    if not rows:
        return "_No rows._"
    lines = ["| " + " | ".join(columns) + " |"]
    lines.append("| " + " | ".join(["---"] * len(columns)) + " |")
    for row in rows[:limit]:
        lines.append("| " + " | ".join(str(row.get(c, "")) for c in columns) + " |")
    if len(rows) > limit:
        lines.append(f"\n_...and {len(rows) - limit} more rows_")
    return "\n".join(lines)


def format_circuit_stats(
    stats: dict, title: str = "Circuit", fmt: ResponseFormat = ResponseFormat.MARKDOWN
) -> str:
    if fmt == ResponseFormat.JSON:
        return json.dumps(stats, indent=2)
    lines = [f"## {title}\n"]
    lines.append(f"- **Nodes**: {stats['num_nodes']} ({stats['edges']} edges, depth {stats['depth']})")
    lines.append(f"- **Leaves**: {stats['num_leaves']} declared, {stats['used_leaves']} used")
    lines.append(f"- **Outputs**: {stats['num_outputs']}")
    kinds = ", ".join(f"{k}={v}" for k, v in stats["by_kind"].items() if v)
    lines.append(f"- **By kind**: {kinds}")
    return "\n".join(lines)


def format_bounds(
    relaxed: Sequence[Interval],
    exact: Optional[Sequence[Interval]] = None,
    fmt: ResponseFormat = ResponseFormat.MARKDOWN,
) -> str:
    if fmt == ResponseFormat.JSON:
        payload: dict[str, Any] = {"relaxed": [[iv.lo, iv.hi] for iv in relaxed]}
        if exact is not None:
            payload["exact"] = [[iv.lo, iv.hi] for iv in exact]
        return json.dumps(payload, indent=2)
    rows = []
    for k, iv in enumerate(relaxed):
        row = {"output": k, "relaxed": str(iv), "width": _num(iv.width)}
        if exact is not None:
            row["exact"] = str(exact[k])
            row["exact width"] = _num(exact[k].width)
        rows.append(row)
    cols = ["output", "relaxed", "width"] + (["exact", "exact width"] if exact is not None else [])
    return "## Output bounds\n\n" + markdown_table(rows, cols)


def format_verification_summary(reports: Sequence, fmt: ResponseFormat = ResponseFormat.MARKDOWN) -> str:
    """One row per report: eps, robustness, mean bounds of the correct output, mean runtime."""
    if fmt == ResponseFormat.JSON:
        return json.dumps(
            [r.model_dump(exclude={"samples"}) for r in reports], indent=2, default=str
        )
    rows = [
        {
            "eps": f"{r.eps:g}",
            "method": r.method,
            "robustness %": f"{100 * r.robustness:.2f}",
            "mean lower": _num(r.mean_lower),
            "mean upper": _num(r.mean_upper),
            "runtime/sample (s)": f"{r.mean_runtime_s:.4f}",
            "errors": r.errors,
        }
        for r in reports
    ]
    cols = ["eps", "method", "robustness %", "mean lower", "mean upper", "runtime/sample (s)", "errors"]
    return "## Verification summary\n\n" + markdown_table(rows, cols)


def format_emajsat_summary(summary, fmt: ResponseFormat = ResponseFormat.MARKDOWN) -> str:
    if fmt == ResponseFormat.JSON:
        return json.dumps(
            {
                "seed": summary.seed,
                "total": summary.total,
                "agreed": summary.agreed,
                "disagreements": [c.model_dump() for c in summary.disagreements],
            },
            indent=2,
        )
    lines = [f"**{summary.agreed}/{summary.total} agree**"]
    for c in summary.disagreements[:20]:
        lines.append(f"- case {c.index} (n={c.n}, m={c.m}): `{c.formula}` brute={c.brute} reduction={c.reduction}")
    return "\n".join(lines)


def format_bench_rows(rows: Sequence, fmt: ResponseFormat = ResponseFormat.MARKDOWN) -> str:
    if fmt == ResponseFormat.JSON:
        return json.dumps([r.model_dump() for r in rows], indent=2)
    table = [
        {
            "digits": r.digits,
            "eps": f"{r.eps:g}",
            "method": r.method,
            "status": r.status,
            "done": f"{r.completed}/{r.samples}",
            "runtime/sample (s)": _num(r.mean_runtime_s, ".4f"),
            "robustness %": _num(r.robustness_pct, ".2f"),
            "mean lower": _num(r.mean_lower),
            "mean upper": _num(r.mean_upper),
        }
        for r in rows
    ]
    cols = ["digits", "eps", "method", "status", "done", "runtime/sample (s)", "robustness %", "mean lower", "mean upper"]
    return markdown_table(table, cols, limit=len(table) or 1)

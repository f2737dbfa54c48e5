"""Wire format for agent actions.

One line `ACTION <tool> <json-args>`, or a reply starting `FINAL:` for the
final answer. parse_action extracts the first well-formed action and keeps
the surrounding prose as the thought; text with no parseable action raises
MalformedAction, which the loop turns into a repair re-prompt.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import MalformedAction

TOOL_NAMES = ("projects", "entities", "codes", "graph_query", "source")

_QUERY_TOOLS = {"projects", "entities", "codes"}


@dataclass(frozen=True)
class ToolCall:
    tool: str
    args: dict


@dataclass(frozen=True)
class FinalAnswer:
    text: str


AgentAction = ToolCall | FinalAnswer


def normalize_tool_name(raw: str) -> str:
    name = raw.strip().lower()
    if name.endswith("_tool"):
        name = name[:-5]
    return name


def validate_args(tool: str, args: dict) -> None:
    if not isinstance(args, dict):
        raise MalformedAction(f"{tool}: args must be a JSON object")
    if tool in _QUERY_TOOLS:
        allowed = {"query", "k", "threshold"}
        if not isinstance(args.get("query"), str) or not args["query"]:
            raise MalformedAction(f"{tool}: required string arg 'query' missing")
        if "k" in args and (not isinstance(args["k"], int) or isinstance(args["k"], bool)
                            or args["k"] < 1):
            raise MalformedAction(f"{tool}: 'k' must be an integer >= 1")
        if "threshold" in args and not isinstance(args["threshold"], (int, float)):
            raise MalformedAction(f"{tool}: 'threshold' must be a number")
    elif tool == "graph_query":
        allowed = {"query"}
        if not isinstance(args.get("query"), str) or not args["query"]:
            raise MalformedAction("graph_query: required string arg 'query' missing")
    elif tool == "source":
        allowed = {"id"}
        if not isinstance(args.get("id"), str) or not args["id"]:
            raise MalformedAction("source: required string arg 'id' missing")
    else:
        raise MalformedAction(f"unknown tool {tool!r}; expected one of {', '.join(TOOL_NAMES)}")
    extras = set(args) - allowed
    if extras:
        raise MalformedAction(f"{tool}: unexpected args {sorted(extras)}")


def parse_action(text: str) -> tuple[AgentAction, str]:
    """Return (action, thought) for the first well-formed action block."""
    lines = text.splitlines()
    first_error: MalformedAction | None = None
    for i, line in enumerate(lines):
        stripped = line.strip()
        if stripped.startswith("FINAL:"):
            remainder = [stripped[len("FINAL:"):].lstrip()] + lines[i + 1:]
            answer = "\n".join(remainder).strip()
            thought = "\n".join(lines[:i]).strip()
            return FinalAnswer(text=answer), thought
        if stripped.startswith("ACTION"):
            try:
                action = _parse_action_line(stripped)
            except MalformedAction as exc:
                first_error = first_error or exc
                continue
            thought = "\n".join(lines[:i] + lines[i + 1:]).strip()
            return action, thought
    if first_error is not None:
        raise first_error
    raise MalformedAction("no action block found; reply with `ACTION <tool> <json-args>` or `FINAL: ...`")


def _parse_action_line(line: str) -> ToolCall:
    parts = line.split(None, 2)
    if len(parts) < 2:
        raise MalformedAction("ACTION line missing tool name")
    tool = normalize_tool_name(parts[1])
    raw_args = parts[2].strip() if len(parts) > 2 else ""
    if raw_args:
        try:
            args = json.loads(raw_args)
        except json.JSONDecodeError as exc:
            raise MalformedAction(f"ACTION args are not valid JSON: {exc}") from exc
    else:
        args = {}
    validate_args(tool, args)
    return ToolCall(tool=tool, args=args)


def action_line(action: ToolCall) -> str:
    return f"ACTION {action.tool} {json.dumps(action.args, sort_keys=True)}"

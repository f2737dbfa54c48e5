"""Reactive exploration agent: actions, tools, loop, and traces."""

from .actions import (
    TOOL_NAMES,
    AgentAction,
    FinalAnswer,
    ToolCall,
    action_line,
    normalize_tool_name,
    parse_action,
    validate_args,
)
from .loop import Agent, AgentBudget, load_system_prompt
from .tools import (
    ToolContext,
    ToolResult,
    codes_tool,
    entities_tool,
    estimate_tokens,
    first_sentence,
    graph_query_tool,
    projects_tool,
    render_subgraph,
    run_tool,
    source_tool,
    subgraph_payload,
)
from .trace import AgentTrace, TraceStep

__all__ = [
    "TOOL_NAMES",
    "Agent",
    "AgentAction",
    "AgentBudget",
    "AgentTrace",
    "FinalAnswer",
    "ToolCall",
    "ToolContext",
    "ToolResult",
    "TraceStep",
    "action_line",
    "codes_tool",
    "entities_tool",
    "estimate_tokens",
    "first_sentence",
    "graph_query_tool",
    "load_system_prompt",
    "normalize_tool_name",
    "parse_action",
    "projects_tool",
    "render_subgraph",
    "run_tool",
    "source_tool",
    "subgraph_payload",
    "validate_args",
]

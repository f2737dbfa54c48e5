"""The five graph-retrieval tools and subgraph-to-text rendering.

Each tool composes documented graph/index primitives and returns a ToolResult
whose payload is truncated to the per-observation token budget (estimator:
ceil(chars / 4)). Payload rendering is deterministic so observations are
byte-reproducible against the same snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import NoEntities, NotACodeNode
from ..graph import CodeGraph, NodeKind, execute_query, render_rows
from ..errors import ParseError
from ..index import SemanticIndex

TRUNCATION_MARKER = "\n... [truncated]"
EMPTY_RESULT = "(empty result)"


def estimate_tokens(text: str) -> int:
    return (len(text) + 3) // 4


@dataclass
class ToolResult:
    tool: str
    payload: str
    subgraph: dict | None = None
    token_estimate: int = 0
    diagnostics: list[str] = field(default_factory=list)
    truncated: bool = False


@dataclass
class ToolContext:
    graph: CodeGraph
    index: SemanticIndex
    obs_tokens: int = 2000


def first_sentence(text: str) -> str:
    idx = text.find(". ")
    return text[: idx + 1] if idx >= 0 else text


def render_subgraph(view: CodeGraph) -> str:
    """Compact deterministic lines: nodes by (kind, id), edges by (src, label, dst)."""
    nodes = sorted(view.iter_nodes(), key=lambda n: (n.kind.value, n.id))
    if not nodes:
        return EMPTY_RESULT
    lines = []
    for node in nodes:
        line = f"[{node.kind.value}] {node.id}: {node.name}"
        if node.description:
            line += f" — {first_sentence(node.description)}"
        lines.append(line)
    for edge in view.edges():
        lines.append(f"{edge.src} -{edge.label}-> {edge.dst}")
    return "\n".join(lines)


def subgraph_payload(view: CodeGraph) -> dict:
    """Machine form of a subgraph for traces and the UI."""
    return {
        "nodes": [
            {"id": n.id, "kind": n.kind.value, "name": n.name,
             "description": n.description}
            for n in sorted(view.iter_nodes(), key=lambda n: (n.kind.value, n.id))
        ],
        "edges": [
            {"src": e.src, "label": e.label, "dst": e.dst} for e in view.edges()
        ],
    }


def _finish(ctx: ToolContext, tool: str, payload: str,
            subgraph: dict | None = None, diagnostics: list[str] | None = None) -> ToolResult:
    diagnostics = diagnostics or []
    budget_chars = ctx.obs_tokens * 4
    truncated = False
    if len(payload) > budget_chars:
        payload = payload[: max(budget_chars - len(TRUNCATION_MARKER), 0)] + TRUNCATION_MARKER
        diagnostics.append(f"payload truncated to ~{ctx.obs_tokens} tokens")
        truncated = True
    return ToolResult(tool=tool, payload=payload, subgraph=subgraph,
                      token_estimate=estimate_tokens(payload),
                      diagnostics=diagnostics, truncated=truncated)


def projects_tool(ctx: ToolContext, query: str, k: int | None = None,
                  threshold: float | None = None) -> ToolResult:
    """Search projects, expand to contained code, keep query-relevant code,
    return the induced subgraph. The code-relevance filter reuses the search
    threshold."""
    qvec = ctx.index.query_vector(query)
    hits = ctx.index.search_vector(qvec, NodeKind.PROJECT, k=k, threshold=threshold)
    if not hits:
        return _finish(ctx, "projects", EMPTY_RESULT, None, ["no projects matched"])
    thr = ctx.index.default_threshold if threshold is None else threshold
    code_ids: set[str] = set()
    for hit in hits:
        code_ids |= ctx.graph.neighborhood(hit.id, direction="out",
                                           labels=("CONTAINS",), depth=1)
    survivors = {
        cid for cid in code_ids
        if (score := ctx.index.score(cid, qvec)) is not None and score >= thr
    }
    view = ctx.graph.induced_subgraph({h.id for h in hits} | survivors)
    return _finish(ctx, "projects", render_subgraph(view), subgraph_payload(view))


def entities_tool(ctx: ToolContext, query: str, k: int | None = None,
                  threshold: float | None = None) -> ToolResult:
    """Search entities, pull every incoming edge source, return the induced
    subgraph: the cross-project hub view."""
    if not ctx.graph.nodes_of_kind(NodeKind.ENTITY):
        raise NoEntities("graph has no Entity nodes; semantic layer not applied")
    hits = ctx.index.search(query, NodeKind.ENTITY, k=k, threshold=threshold)
    if not hits:
        return _finish(ctx, "entities", EMPTY_RESULT, None, ["no entities matched"])
    ids = {h.id for h in hits}
    for hit in hits:
        ids |= {e.src for e in ctx.graph.in_edges(hit.id)}
    view = ctx.graph.induced_subgraph(ids)
    return _finish(ctx, "entities", render_subgraph(view), subgraph_payload(view))


def codes_tool(ctx: ToolContext, query: str, k: int | None = None,
               threshold: float | None = None) -> ToolResult:
    """Search code nodes and return the induced subgraph over the hits
    (mutual edges included)."""
    hits = ctx.index.search(query, NodeKind.CODE, k=k, threshold=threshold)
    if not hits:
        return _finish(ctx, "codes", EMPTY_RESULT, None, ["no code nodes matched"])
    view = ctx.graph.induced_subgraph({h.id for h in hits})
    return _finish(ctx, "codes", render_subgraph(view), subgraph_payload(view))


def graph_query_tool(ctx: ToolContext, query: str) -> ToolResult:
    """Run a DSL query; parse errors come back as observations so the agent
    can correct itself."""
    try:
        rows = execute_query(ctx.graph, query)
    except ParseError as exc:
        return _finish(ctx, "graph_query", f"QUERY ERROR: {exc}", None, ["parse error"])
    return _finish(ctx, "graph_query", render_rows(rows))


def source_tool(ctx: ToolContext, code_id: str) -> ToolResult:
    """Verbatim source slice of one Code node."""
    node = ctx.graph.node(code_id)  # UnknownId propagates
    if node.kind is not NodeKind.CODE:
        raise NotACodeNode(f"{code_id!r} is a {node.kind.value} node, not Code")
    return _finish(ctx, "source", node.attrs.get("source", ""))


def run_tool(ctx: ToolContext, tool: str, args: dict) -> ToolResult:
    if tool == "projects":
        return projects_tool(ctx, args["query"], args.get("k"), args.get("threshold"))
    if tool == "entities":
        return entities_tool(ctx, args["query"], args.get("k"), args.get("threshold"))
    if tool == "codes":
        return codes_tool(ctx, args["query"], args.get("k"), args.get("threshold"))
    if tool == "graph_query":
        return graph_query_tool(ctx, args["query"])
    if tool == "source":
        return source_tool(ctx, args["id"])
    raise ValueError(f"unknown tool {tool!r}")

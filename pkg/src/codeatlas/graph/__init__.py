"""Typed property-graph store, query DSL, and snapshot persistence."""

from .model import (
    CODE_TO_CODE_LABELS,
    STRUCTURAL_LABELS,
    CodeGraph,
    Edge,
    Node,
    NodeId,
    NodeKind,
    edge_allowed,
)
from .query import (
    GraphQuery,
    QueryRows,
    execute_query,
    parse_query,
    render_rows,
)
from .snapshot import graph_from_bytes, load_snapshot, save_snapshot, snapshot_bytes

__all__ = [
    "CODE_TO_CODE_LABELS",
    "STRUCTURAL_LABELS",
    "CodeGraph",
    "Edge",
    "GraphQuery",
    "Node",
    "NodeId",
    "NodeKind",
    "QueryRows",
    "edge_allowed",
    "execute_query",
    "graph_from_bytes",
    "load_snapshot",
    "parse_query",
    "render_rows",
    "save_snapshot",
    "snapshot_bytes",
]

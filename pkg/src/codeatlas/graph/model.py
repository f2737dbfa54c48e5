"""In-memory directed labeled property multigraph for code knowledge graphs.

Node kinds form a fixed vocabulary (System, Project, Code, Entity) and edge
labels are validated against a total kind-compatibility predicate, so every
graph this package ever constructs satisfies the same schema. The store is
deliberately embedded and dependency-free: builds get exclusive write access,
after which the graph is safe to share between reader threads (freeze() makes
that explicit for subgraph views).

Label compatibility:

    System  -> Project : CONTAINS
    Project -> Code    : CONTAINS
    Code    -> Code    : DEPENDS_ON | CALLS | IMPLEMENTS
    Code    -> Entity  : REPRESENTS or any non-reserved verb label
    Entity  -> Project : RELATES_TO

No other (source kind, destination kind) pair is permitted.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from ..errors import (
    DuplicateId,
    ReadOnlyGraph,
    SchemaViolation,
    UnknownEndpoint,
    UnknownId,
)

NodeId = str

LABEL_RE = re.compile(r"^[A-Z][A-Z_]*$")

#: Labels with fixed structural meaning; dynamic verb edges must avoid these.
STRUCTURAL_LABELS = frozenset(
    {"CONTAINS", "DEPENDS_ON", "CALLS", "IMPLEMENTS", "REPRESENTS", "RELATES_TO"}
)

CODE_TO_CODE_LABELS = frozenset({"DEPENDS_ON", "CALLS", "IMPLEMENTS"})

EMBEDDING_NORM_TOL = 1e-6


class NodeKind(str, Enum):
    SYSTEM = "System"
    PROJECT = "Project"
    CODE = "Code"
    ENTITY = "Entity"


def edge_allowed(src_kind: NodeKind, label: str, dst_kind: NodeKind) -> bool:
    """Total predicate: may an edge with this label join these node kinds?

    Returns False (never raises) for malformed labels or unsupported kind
    pairs, so it can double as the property-test oracle.
    """
    if not LABEL_RE.match(label):
        return False
    if src_kind is NodeKind.SYSTEM and dst_kind is NodeKind.PROJECT:
        return label == "CONTAINS"
    if src_kind is NodeKind.PROJECT and dst_kind is NodeKind.CODE:
        return label == "CONTAINS"
    if src_kind is NodeKind.CODE and dst_kind is NodeKind.CODE:
        return label in CODE_TO_CODE_LABELS
    if src_kind is NodeKind.CODE and dst_kind is NodeKind.ENTITY:
        return label == "REPRESENTS" or label not in STRUCTURAL_LABELS
    if src_kind is NodeKind.ENTITY and dst_kind is NodeKind.PROJECT:
        return label == "RELATES_TO"
    return False


@dataclass
class Node:
    """Graph node. `attrs` is a flat string map (file, span, source, ...)."""

    id: NodeId
    kind: NodeKind
    name: str
    description: str | None = None
    embedding: np.ndarray | None = None
    attrs: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Edge:
    src: NodeId
    dst: NodeId
    label: str
    attrs: dict[str, str] = field(default_factory=dict)

    @property
    def key(self) -> tuple[NodeId, str, NodeId]:
        return (self.src, self.label, self.dst)


@dataclass
class GraphMeta:
    """Build metadata. Only the system name survives snapshots; timestamps
    stay in memory so snapshot bytes are reproducible."""

    system_name: str = ""
    schema_version: int = 1
    created_at: float = field(default_factory=time.time)
    embedding_dim: int | None = None


class CodeGraph:
    """Mutable-until-frozen property multigraph keyed by string node ids.

    Duplicate edges (same src, dst, label) collapse to one; the first
    insertion's attrs win. Iteration orders are always sorted so downstream
    renderings and snapshots are stable across runs.
    """

    SCHEMA_VERSION = 1

    def __init__(self, system_name: str = ""):
        self.meta = GraphMeta(system_name=system_name, schema_version=self.SCHEMA_VERSION)
        self._nodes: dict[NodeId, Node] = {}
        self._edges: dict[tuple[NodeId, str, NodeId], Edge] = {}
        self._out: dict[NodeId, set[tuple[str, NodeId]]] = {}
        self._in: dict[NodeId, set[tuple[str, NodeId]]] = {}
        self._frozen = False

    # -- mutation ---------------------------------------------------------

    def _check_writable(self) -> None:
        if self._frozen:
            raise ReadOnlyGraph("graph view is read-only")

    def add_node(self, node: Node) -> NodeId:
        self._check_writable()
        if not node.id:
            raise SchemaViolation("node id must be non-empty")
        if node.id in self._nodes:
            raise DuplicateId(f"node id already present: {node.id!r}")
        if not isinstance(node.kind, NodeKind):
            raise SchemaViolation(f"unknown node kind: {node.kind!r}")
        if node.kind is NodeKind.CODE:
            if not node.attrs.get("file") or not node.attrs.get("span"):
                raise SchemaViolation(
                    f"Code node {node.id!r} needs non-empty 'file' and 'span' attrs"
                )
        if node.embedding is not None:
            _check_unit_norm(node.id, node.embedding)
        self._nodes[node.id] = node
        self._out[node.id] = set()
        self._in[node.id] = set()
        return node.id

    def add_edge(self, edge: Edge) -> None:
        self._check_writable()
        if edge.src not in self._nodes:
            raise UnknownEndpoint(f"edge source not in graph: {edge.src!r}")
        if edge.dst not in self._nodes:
            raise UnknownEndpoint(f"edge destination not in graph: {edge.dst!r}")
        src_kind = self._nodes[edge.src].kind
        dst_kind = self._nodes[edge.dst].kind
        if not edge_allowed(src_kind, edge.label, dst_kind):
            raise SchemaViolation(
                f"label {edge.label!r} not permitted for "
                f"{src_kind.value} -> {dst_kind.value}"
            )
        if edge.key in self._edges:
            return  # idempotent; first insertion's attrs win
        self._edges[edge.key] = edge
        self._out[edge.src].add((edge.label, edge.dst))
        self._in[edge.dst].add((edge.label, edge.src))

    def set_description(self, node_id: NodeId, text: str) -> None:
        self._check_writable()
        self.node(node_id).description = text

    def set_embedding(self, node_id: NodeId, vector: np.ndarray) -> None:
        self._check_writable()
        vec = np.asarray(vector, dtype=np.float32)
        _check_unit_norm(node_id, vec)
        self.node(node_id).embedding = vec
        if self.meta.embedding_dim is None:
            self.meta.embedding_dim = int(vec.shape[0])

    def freeze(self) -> None:
        self._frozen = True

    @property
    def frozen(self) -> bool:
        return self._frozen

    # -- lookup -------------------------------------------------------------

    def has_node(self, node_id: NodeId) -> bool:
        return node_id in self._nodes

    def node(self, node_id: NodeId) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownId(f"no node with id {node_id!r}") from None

    def node_ids(self) -> list[NodeId]:
        return sorted(self._nodes)

    def iter_nodes(self) -> list[Node]:
        return [self._nodes[i] for i in self.node_ids()]

    def nodes_of_kind(self, kind: NodeKind) -> list[Node]:
        return [n for n in self.iter_nodes() if n.kind is kind]

    def edges(self) -> list[Edge]:
        return [self._edges[k] for k in sorted(self._edges)]

    def has_edge(self, src: NodeId, label: str, dst: NodeId) -> bool:
        return (src, label, dst) in self._edges

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def kind_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for node in self._nodes.values():
            counts[node.kind.value] = counts.get(node.kind.value, 0) + 1
        return counts

    def out_edges(self, node_id: NodeId, labels: Iterable[str] | None = None) -> list[Edge]:
        self.node(node_id)
        wanted = set(labels) if labels is not None else None
        keys = [
            (node_id, label, dst)
            for (label, dst) in self._out.get(node_id, ())
            if wanted is None or label in wanted
        ]
        return [self._edges[k] for k in sorted(keys)]

    def in_edges(self, node_id: NodeId, labels: Iterable[str] | None = None) -> list[Edge]:
        self.node(node_id)
        wanted = set(labels) if labels is not None else None
        keys = [
            (src, label, node_id)
            for (label, src) in self._in.get(node_id, ())
            if wanted is None or label in wanted
        ]
        return [self._edges[k] for k in sorted(keys)]

    # -- traversal ------------------------------------------------------------

    def neighborhood(
        self,
        node_id: NodeId,
        direction: str = "out",
        labels: Iterable[str] | None = None,
        depth: int = 1,
    ) -> set[NodeId]:
        """Union of BFS frontiers 1..depth from `node_id`.

        The seed is excluded unless some walk of length >= 1 leads back to it.
        `direction` is one of "in", "out", "both".
        """
        if depth < 1:
            raise ValueError("depth must be >= 1")
        if direction not in ("in", "out", "both"):
            raise ValueError(f"bad direction: {direction!r}")
        self.node(node_id)
        wanted = set(labels) if labels is not None else None

        def step(nid: NodeId) -> set[NodeId]:
            nxt: set[NodeId] = set()
            if direction in ("out", "both"):
                nxt.update(
                    dst for (label, dst) in self._out.get(nid, ())
                    if wanted is None or label in wanted
                )
            if direction in ("in", "both"):
                nxt.update(
                    src for (label, src) in self._in.get(nid, ())
                    if wanted is None or label in wanted
                )
            return nxt

        reached: set[NodeId] = set()
        frontier = {node_id}
        for _ in range(depth):
            frontier = {m for n in frontier for m in step(n)} - reached
            if not frontier:
                break
            reached |= frontier
        return reached

    def induced_subgraph(self, ids: Iterable[NodeId]) -> "CodeGraph":
        """Read-only view with exactly `ids` and every edge among them."""
        wanted = set(ids)
        for nid in wanted:
            if nid not in self._nodes:
                raise UnknownId(f"no node with id {nid!r}")
        sub = CodeGraph(self.meta.system_name)
        sub.meta.embedding_dim = self.meta.embedding_dim
        for nid in sorted(wanted):
            sub._nodes[nid] = self._nodes[nid]
            sub._out[nid] = set()
            sub._in[nid] = set()
        for key, edge in self._edges.items():
            if edge.src in wanted and edge.dst in wanted:
                sub._edges[key] = edge
                sub._out[edge.src].add((edge.label, edge.dst))
                sub._in[edge.dst].add((edge.label, edge.src))
        sub.freeze()
        return sub

    def contains_parents(self, node_id: NodeId) -> list[NodeId]:
        return [e.src for e in self.in_edges(node_id, labels=("CONTAINS",))]

    def system_node(self) -> Node:
        systems = self.nodes_of_kind(NodeKind.SYSTEM)
        if len(systems) != 1:
            raise SchemaViolation(f"expected exactly one System node, found {len(systems)}")
        return systems[0]

    # -- invariants -------------------------------------------------------------

    def validate(self) -> None:
        """Check whole-graph invariants of a fully built graph.

        Raises SchemaViolation on the first breach. Subgraph views are not
        expected to pass (they usually lack the System node).
        """
        system = self.system_node()
        for node in self.iter_nodes():
            if node.embedding is not None:
                _check_unit_norm(node.id, node.embedding)
            if node.kind is NodeKind.PROJECT:
                parents = self.contains_parents(node.id)
                if parents != [system.id]:
                    raise SchemaViolation(
                        f"Project {node.id!r} must be contained by the System node"
                    )
            elif node.kind is NodeKind.CODE:
                parents = self.contains_parents(node.id)
                if len(parents) != 1:
                    raise SchemaViolation(
                        f"Code {node.id!r} has {len(parents)} CONTAINS parents, wanted 1"
                    )
                if self._nodes[parents[0]].kind is not NodeKind.PROJECT:
                    raise SchemaViolation(
                        f"Code {node.id!r} contained by non-Project {parents[0]!r}"
                    )
            elif node.kind is NodeKind.ENTITY:
                if self.contains_parents(node.id):
                    raise SchemaViolation(f"Entity {node.id!r} must not have CONTAINS parents")
        for edge in self._edges.values():
            src_kind = self._nodes[edge.src].kind
            dst_kind = self._nodes[edge.dst].kind
            if not edge_allowed(src_kind, edge.label, dst_kind):
                raise SchemaViolation(
                    f"edge {edge.key} violates kind compatibility"
                )

    # -- comparison helper (tests, record/replay checks) -----------------------

    def same_content(self, other: "CodeGraph") -> bool:
        if self.node_ids() != other.node_ids():
            return False
        if sorted(self._edges) != sorted(other._edges):
            return False
        for nid in self.node_ids():
            a, b = self._nodes[nid], other._nodes[nid]
            if (a.kind, a.name, a.description, a.attrs) != (b.kind, b.name, b.description, b.attrs):
                return False
            if (a.embedding is None) != (b.embedding is None):
                return False
            if a.embedding is not None and b.embedding is not None:
                if a.embedding.tobytes() != b.embedding.tobytes():
                    return False
        for key in self._edges:
            if self._edges[key].attrs != other._edges[key].attrs:
                return False
        return True


def _check_unit_norm(node_id: NodeId, vector: np.ndarray) -> None:
    norm = float(np.linalg.norm(np.asarray(vector, dtype=np.float64)))
    if abs(norm - 1.0) > EMBEDDING_NORM_TOL:
        raise SchemaViolation(
            f"embedding for {node_id!r} has L2 norm {norm!r}, expected 1 +/- {EMBEDDING_NORM_TOL}"
        )

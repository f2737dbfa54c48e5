"""Semantic search over node descriptions.

Exact brute-force cosine scan, no approximate index: system graphs top out at
thousands of nodes and exactness buys oracle-testability. Embeddings are
unit-norm so cosine reduces to a dot product. Defaults (k=5, threshold=0.35)
are config-overridable and surfaced in tool traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyIndex, ProviderFailure
from .graph import CodeGraph, NodeKind
from .llm import LlmProvider

DEFAULT_K = 5
DEFAULT_THRESHOLD = 0.35


@dataclass(frozen=True)
class SearchHit:
    id: str
    score: float


@dataclass
class EmbedReport:
    embedded: int = 0
    skipped_no_description: int = 0
    degraded: list[str] = field(default_factory=list)


def embed_all(graph: CodeGraph, provider: LlmProvider) -> EmbedReport:
    """Embed every described node; undescribed or token-free nodes are skipped
    and counted, provider failures degrade the node and the build continues."""
    report = EmbedReport()
    for node in graph.iter_nodes():
        if not node.description:
            report.skipped_no_description += 1
            continue
        try:
            vector = provider.embed(node.description)
        except ProviderFailure:
            report.degraded.append(node.id)
            continue
        if float(np.linalg.norm(vector)) == 0.0:
            report.skipped_no_description += 1
            continue
        graph.set_embedding(node.id, vector)
        report.embedded += 1
    return report


class SemanticIndex:
    """Read-only top-k cosine search over a graph's embedded nodes by kind."""

    def __init__(self, graph: CodeGraph, provider: LlmProvider,
                 k: int = DEFAULT_K, threshold: float = DEFAULT_THRESHOLD):
        self.graph = graph
        self.provider = provider
        self.default_k = k
        self.default_threshold = threshold
        self._ids: dict[NodeKind, list[str]] = {}
        self._matrix: dict[NodeKind, np.ndarray] = {}
        for kind in NodeKind:
            embedded = [(n.id, n.embedding) for n in graph.nodes_of_kind(kind)
                        if n.embedding is not None]
            self._ids[kind] = [nid for nid, _ in embedded]
            if embedded:
                self._matrix[kind] = np.stack([vec for _, vec in embedded])

    def query_vector(self, query: str) -> np.ndarray:
        return self.provider.embed(query)

    def search(self, query: str, kind: NodeKind, k: int | None = None,
               threshold: float | None = None) -> list[SearchHit]:
        """Top-k nodes of `kind` with cosine >= threshold, ordered by
        (score desc, id asc)."""
        return self.search_vector(self.query_vector(query), kind, k, threshold)

    def search_vector(self, query_vector: np.ndarray, kind: NodeKind,
                      k: int | None = None, threshold: float | None = None) -> list[SearchHit]:
        k = self.default_k if k is None else k
        threshold = self.default_threshold if threshold is None else threshold
        if k < 1:
            raise ValueError("k must be >= 1")
        ids = self._ids[kind]
        if not ids:
            raise EmptyIndex(f"no embedded {kind.value} nodes in the index")
        scores = self._matrix[kind].astype(np.float64) @ np.asarray(query_vector, np.float64)
        hits = sorted(
            (SearchHit(id=nid, score=float(s)) for nid, s in zip(ids, scores)),
            key=lambda h: (-h.score, h.id),
        )
        return [h for h in hits if h.score >= threshold][:k]

    def score(self, node_id: str, query_vector: np.ndarray) -> float | None:
        """Cosine of one node against a query vector; None if unembedded."""
        node = self.graph.node(node_id)
        if node.embedding is None:
            return None
        return float(node.embedding.astype(np.float64) @ np.asarray(query_vector, np.float64))

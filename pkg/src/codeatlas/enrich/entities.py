"""Domain-entity extraction and the semantic graph layer.

Extraction runs one deep-tier provider call per project (all of the project's
code summaries in one prompt), parses the strict-JSON response, and validates
every piece: bad verbs, unknown uids, and empty names are dropped with
diagnostics rather than failing the build. Per-project extractions are then
merged by normalized entity name into a canonical set (the cross-project hub
behavior) and applied to the graph as Entity nodes with verb, REPRESENTS,
and RELATES_TO edges.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from ..errors import ProviderFailure
from ..graph import CodeGraph, Edge, Node, NodeKind, STRUCTURAL_LABELS
from ..llm import LlmProvider, with_retries
from .prompts import PromptTemplates

_VERB_RE = re.compile(r"^[A-Z][A-Z_]*$")

ENTITY_ID_PREFIX = "entity:"


def normalize_entity_name(raw: str) -> str:
    """Trim, collapse whitespace, singularize a naive trailing 's' on the last
    word (unless it ends in 'ss'), and title-case each word."""
    words = raw.strip().split()
    if not words:
        return ""
    last = words[-1]
    if len(last) > 1 and last.lower().endswith("s") and not last.lower().endswith("ss"):
        words[-1] = last[:-1]
    return " ".join(w[:1].upper() + w[1:].lower() for w in words)


def entity_node_id(name: str) -> str:
    return ENTITY_ID_PREFIX + name


@dataclass(frozen=True)
class EntityOperation:
    code_uid: str
    verb: str


@dataclass
class EntityRecord:
    name: str  # normalized
    description: str
    operations: list[EntityOperation] = field(default_factory=list)
    represented_by: list[str] = field(default_factory=list)


@dataclass
class EntityExtraction:
    project_id: str
    entities: list[EntityRecord] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)


@dataclass
class CanonicalEntity:
    name: str
    description: str
    operations: list[EntityOperation] = field(default_factory=list)
    represented_by: list[str] = field(default_factory=list)


@dataclass
class SemanticLayerReport:
    entities: int = 0
    verb_edges: int = 0
    represents_edges: int = 0
    relates_to_edges: int = 0
    diagnostics: list[str] = field(default_factory=list)


def extract_entities(
    graph: CodeGraph,
    project_id: str,
    provider: LlmProvider,
    templates: PromptTemplates,
    repair_retries: int = 2,
    retries: int = 3,
) -> EntityExtraction:
    """One provider call (plus JSON-repair re-prompts) for one project batch."""
    extraction = EntityExtraction(project_id=project_id)
    project = graph.node(project_id)
    children = sorted(e.dst for e in graph.out_edges(project_id, labels=("CONTAINS",)))
    if not children:
        return extraction

    units_block = "\n".join(
        f"- {cid} | {graph.node(cid).name} | {graph.node(cid).description or ''}"
        for cid in children
    )
    prompt = templates.render("entity_extraction", name=project.name, units=units_block)

    attempt_prompt = prompt
    parsed = None
    for attempt in range(repair_retries + 1):
        text = with_retries(lambda p=attempt_prompt: provider.complete(p, tier="deep"),
                            attempts=retries)
        try:
            parsed = json.loads(text)
            break
        except json.JSONDecodeError as exc:
            extraction.diagnostics.append(
                f"{project.name}: extraction reply not valid JSON (attempt {attempt + 1}): {exc}"
            )
            attempt_prompt = (
                f"{prompt}\nYour previous reply was not valid JSON ({exc}). "
                f"Reply with strict JSON only, no surrounding text."
            )
    if parsed is None:
        extraction.diagnostics.append(
            f"{project.name}: extraction stayed malformed after "
            f"{repair_retries} repair retries; using empty extraction"
        )
        return extraction

    _validate_payload(graph, parsed, extraction)
    return extraction


def _validate_payload(graph: CodeGraph, parsed, extraction: EntityExtraction) -> None:
    if not isinstance(parsed, dict) or not isinstance(parsed.get("entities"), list):
        extraction.diagnostics.append("extraction payload missing 'entities' list; ignored")
        return
    by_name: dict[str, EntityRecord] = {}
    for raw in parsed["entities"]:
        if not isinstance(raw, dict):
            extraction.diagnostics.append("non-object entity entry dropped")
            continue
        name = normalize_entity_name(str(raw.get("name", "")))
        if not name:
            extraction.diagnostics.append("entity with empty name dropped")
            continue
        record = by_name.setdefault(name, EntityRecord(
            name=name,
            description=str(raw.get("description", "")).strip() or f"Domain entity {name}.",
        ))
        for op in raw.get("operations", []) or []:
            uid = str(op.get("code", "")) if isinstance(op, dict) else ""
            verb = str(op.get("verb", "")) if isinstance(op, dict) else ""
            if not _VERB_RE.match(verb) or verb in STRUCTURAL_LABELS:
                extraction.diagnostics.append(
                    f"entity {name!r}: verb {verb!r} invalid or reserved; operation dropped"
                )
                continue
            if not _is_code_node(graph, uid):
                extraction.diagnostics.append(
                    f"entity {name!r}: operation references unknown code unit {uid!r}; dropped"
                )
                continue
            operation = EntityOperation(code_uid=uid, verb=verb)
            if operation not in record.operations:
                record.operations.append(operation)
        for uid in raw.get("represented_by", []) or []:
            uid = str(uid)
            if not _is_code_node(graph, uid):
                extraction.diagnostics.append(
                    f"entity {name!r}: represented_by references unknown unit {uid!r}; dropped"
                )
                continue
            if uid not in record.represented_by:
                record.represented_by.append(uid)
    for name in sorted(by_name):
        record = by_name[name]
        record.operations.sort(key=lambda op: (op.code_uid, op.verb))
        record.represented_by.sort()
        extraction.entities.append(record)


def _is_code_node(graph: CodeGraph, uid: str) -> bool:
    return graph.has_node(uid) and graph.node(uid).kind is NodeKind.CODE


def merge_entities(extractions: list[EntityExtraction]) -> list[CanonicalEntity]:
    """Union per-project extractions by normalized name.

    Descriptions concatenate in project NodeId order with exact duplicates
    removed; operation and represented_by lists union."""
    merged: dict[str, CanonicalEntity] = {}
    descriptions: dict[str, list[str]] = {}
    for extraction in sorted(extractions, key=lambda e: e.project_id):
        for record in extraction.entities:
            canonical = merged.setdefault(record.name, CanonicalEntity(
                name=record.name, description=""
            ))
            parts = descriptions.setdefault(record.name, [])
            if record.description and record.description not in parts:
                parts.append(record.description)
            for operation in record.operations:
                if operation not in canonical.operations:
                    canonical.operations.append(operation)
            for uid in record.represented_by:
                if uid not in canonical.represented_by:
                    canonical.represented_by.append(uid)
    for name, canonical in merged.items():
        canonical.description = " ".join(descriptions[name]) or f"Domain entity {name}."
        canonical.operations.sort(key=lambda op: (op.code_uid, op.verb))
        canonical.represented_by.sort()
    return [merged[name] for name in sorted(merged)]


def apply_semantic_layer(graph: CodeGraph, entities: list[CanonicalEntity]) -> SemanticLayerReport:
    """Materialize Entity nodes, verb/REPRESENTS edges, and RELATES_TO links.

    Idempotent: node creation skips existing entities and edge insertion
    dedupes, so re-applying the same layer leaves the graph unchanged."""
    report = SemanticLayerReport()
    for entity in sorted(entities, key=lambda e: e.name):
        eid = entity_node_id(entity.name)
        if not graph.has_node(eid):
            graph.add_node(Node(id=eid, kind=NodeKind.ENTITY, name=entity.name,
                                description=entity.description))
            report.entities += 1
        for operation in entity.operations:
            graph.add_edge(Edge(src=operation.code_uid, dst=eid, label=operation.verb))
            report.verb_edges += 1
        for uid in entity.represented_by:
            graph.add_edge(Edge(src=uid, dst=eid, label="REPRESENTS"))
            report.represents_edges += 1
        # a project relates to the entity iff it contains code touching it
        projects = sorted({
            parent
            for edge in graph.in_edges(eid)
            for parent in graph.contains_parents(edge.src)
        })
        for pid in projects:
            graph.add_edge(Edge(src=eid, dst=pid, label="RELATES_TO"))
            report.relates_to_edges += 1
    return report


def enrich_entities(
    graph: CodeGraph,
    provider: LlmProvider,
    templates: PromptTemplates,
) -> tuple[list[CanonicalEntity], SemanticLayerReport, list[str]]:
    """Full entity pass: per-project extraction, merge, apply."""
    diagnostics: list[str] = []
    extractions = []
    for project in graph.nodes_of_kind(NodeKind.PROJECT):
        try:
            extraction = extract_entities(graph, project.id, provider, templates)
        except ProviderFailure as exc:
            diagnostics.append(f"{project.id}: entity extraction failed: {exc}")
            continue
        diagnostics.extend(extraction.diagnostics)
        extractions.append(extraction)
    canonical = merge_entities(extractions)
    report = apply_semantic_layer(graph, canonical)
    report.diagnostics = diagnostics
    return canonical, report, diagnostics

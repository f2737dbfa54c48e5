"""Generative enrichment: hierarchical descriptions and the entity layer."""

from .describe import (
    DEGRADED_ATTR,
    EMPTY_CODE_DESCRIPTION,
    EMPTY_PROJECT_DESCRIPTION,
    DescribeReport,
    describe_code,
    describe_graph,
    describe_project,
    describe_system,
)
from .entities import (
    CanonicalEntity,
    EntityExtraction,
    EntityOperation,
    EntityRecord,
    SemanticLayerReport,
    apply_semantic_layer,
    enrich_entities,
    entity_node_id,
    extract_entities,
    merge_entities,
    normalize_entity_name,
)
from .prompts import PromptTemplates, load_templates

__all__ = [
    "DEGRADED_ATTR",
    "EMPTY_CODE_DESCRIPTION",
    "EMPTY_PROJECT_DESCRIPTION",
    "CanonicalEntity",
    "DescribeReport",
    "EntityExtraction",
    "EntityOperation",
    "EntityRecord",
    "PromptTemplates",
    "SemanticLayerReport",
    "apply_semantic_layer",
    "describe_code",
    "describe_graph",
    "describe_project",
    "describe_system",
    "enrich_entities",
    "entity_node_id",
    "extract_entities",
    "load_templates",
    "merge_entities",
    "normalize_entity_name",
]

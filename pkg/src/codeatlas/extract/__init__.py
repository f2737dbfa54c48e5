"""Algorithmic extraction phase: repositories in, structural graph out."""

from .adapters import adapter_keys, get_adapter
from .build import (
    ExtractionReport,
    build_structural_graph,
    parse_file,
    project_node_id,
    system_node_id,
)
from .repo import DEFAULT_MAX_FILE_BYTES, RepoSpec, ScanResult, scan_repository
from .resolve import resolve_references
from .units import CodeUnit, Diagnostic, ImportContext, ParseOutcome, RawRelation

__all__ = [
    "DEFAULT_MAX_FILE_BYTES",
    "CodeUnit",
    "Diagnostic",
    "ExtractionReport",
    "ImportContext",
    "ParseOutcome",
    "RawRelation",
    "RepoSpec",
    "ScanResult",
    "adapter_keys",
    "build_structural_graph",
    "get_adapter",
    "parse_file",
    "project_node_id",
    "resolve_references",
    "scan_repository",
    "system_node_id",
]

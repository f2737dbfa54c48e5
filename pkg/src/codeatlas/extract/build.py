"""Structural graph assembly over one or more repositories.

File parsing may fan out over a bounded worker pool; everything after that is
a single-threaded reduce over results sorted by (repo, path), so identical
repository bytes always produce an identical graph.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import DuplicateProjectName, IoFailure
from ..graph import CodeGraph, Edge, Node, NodeKind
from .adapters import get_adapter
from .adapters.base import LanguageAdapter
from .repo import DEFAULT_MAX_FILE_BYTES, RepoSpec, scan_repository
from .resolve import resolve_references
from .units import CodeUnit, Diagnostic, ImportContext, ParseOutcome, RawRelation


@dataclass
class RepoReport:
    name: str
    files: int = 0
    units: int = 0
    relations: int = 0

    def to_dict(self) -> dict:
        return {"name": self.name, "files": self.files, "units": self.units,
                "relations": self.relations}


@dataclass
class ExtractionReport:
    system: str
    repos: list[RepoReport] = field(default_factory=list)
    resolved: int = 0
    unresolved: int = 0
    ambiguous: int = 0
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "repos": [r.to_dict() for r in self.repos],
            "resolved": self.resolved,
            "unresolved": self.unresolved,
            "ambiguous": self.ambiguous,
            "diagnostics": [str(d) for d in self.diagnostics],
        }

    def render_text(self) -> str:
        lines = [f"system {self.system}"]
        for repo in self.repos:
            lines.append(
                f"  {repo.name}: {repo.files} files, {repo.units} units, "
                f"{repo.relations} relations"
            )
        lines.append(
            f"  edges: {self.resolved} resolved, {self.unresolved} unresolved, "
            f"{self.ambiguous} ambiguous"
        )
        if self.diagnostics:
            lines.append(f"  diagnostics: {len(self.diagnostics)}")
            lines.extend(f"    {d}" for d in self.diagnostics)
        return "\n".join(lines)


def parse_file(
    adapter: LanguageAdapter, rel_path: str, data: bytes, repo_root: Path | None = None
) -> ParseOutcome:
    """Parse one file; adapter failures are demoted to diagnostics."""
    try:
        return adapter.parse(rel_path, data, repo_root=repo_root)
    except Exception as exc:  # adapters should not raise; keep the pipeline total
        outcome = ParseOutcome()
        outcome.diagnostics.append(Diagnostic(rel_path, f"adapter error: {exc}"))
        return outcome


def system_node_id(system_name: str) -> str:
    return f"system:{system_name}"


def project_node_id(project_name: str) -> str:
    return f"project:{project_name}"


def build_structural_graph(
    specs: list[RepoSpec],
    system_name: str,
    *,
    promote_methods: bool = False,
    max_file_bytes: int = DEFAULT_MAX_FILE_BYTES,
    workers: int = 4,
) -> tuple[CodeGraph, ExtractionReport]:
    if not specs:
        raise ValueError("at least one repository spec is required")
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise DuplicateProjectName(f"duplicate project names in {names}")

    report = ExtractionReport(system=system_name)
    all_units: list[CodeUnit] = []
    all_relations: list[RawRelation] = []
    contexts: dict[str, ImportContext] = {}

    for spec in specs:
        adapter = get_adapter(spec.language, promote_methods=promote_methods)
        scan = scan_repository(spec, adapter, max_bytes=max_file_bytes)
        report.diagnostics.extend(scan.diagnostics)
        repo_report = RepoReport(name=spec.name, files=len(scan.files))

        def parse_one(rel: str, _spec=spec, _adapter=adapter) -> tuple[str, ParseOutcome]:
            full = Path(_spec.root) / rel
            try:
                data = full.read_bytes()
            except OSError as exc:
                raise IoFailure(f"cannot read {full}: {exc}") from exc
            return rel, parse_file(_adapter, rel, data, repo_root=Path(_spec.root))

        if workers > 1 and len(scan.files) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = dict(pool.map(parse_one, scan.files))
        else:
            outcomes = dict(parse_one(rel) for rel in scan.files)

        for rel in scan.files:  # sorted; keeps assembly deterministic
            outcome = outcomes[rel]
            report.diagnostics.extend(outcome.diagnostics)
            for unit in outcome.units:
                unit.repo = spec.name
            all_units.extend(outcome.units)
            all_relations.extend(outcome.relations)
            contexts[f"{spec.name}:{rel}"] = outcome.imports
            repo_report.units += len(outcome.units)
            repo_report.relations += len(outcome.relations)
        report.repos.append(repo_report)

    # enforce system-wide uid uniqueness; first unit by (repo order, path) wins
    seen: set[str] = set()
    kept_units: list[CodeUnit] = []
    dropped_uids: set[str] = set()
    for unit in all_units:
        if unit.uid in seen:
            dropped_uids.add(unit.uid)
            report.diagnostics.append(Diagnostic(
                unit.file, f"duplicate uid {unit.uid!r} in repo {unit.repo!r}; unit dropped"
            ))
            continue
        seen.add(unit.uid)
        kept_units.append(unit)
    if dropped_uids:
        all_relations = [r for r in all_relations if r.src_uid not in dropped_uids]

    graph = CodeGraph(system_name)
    sys_id = system_node_id(system_name)
    graph.add_node(Node(id=sys_id, kind=NodeKind.SYSTEM, name=system_name))
    project_ids = {}
    for spec in specs:
        pid = project_node_id(spec.name)
        graph.add_node(Node(
            id=pid, kind=NodeKind.PROJECT, name=spec.name,
            attrs={"root": str(spec.root), "language": spec.language},
        ))
        graph.add_edge(Edge(src=sys_id, dst=pid, label="CONTAINS"))
        project_ids[spec.name] = pid

    for unit in kept_units:
        attrs = {
            "file": unit.file,
            "span": f"{unit.span[0]}-{unit.span[1]}",
            "language": unit.language,
            "unit_kind": unit.unit_kind,
            "source": unit.source,
        }
        if unit.methods:
            attrs["methods"] = ",".join(unit.methods)
        graph.add_node(Node(id=unit.uid, kind=NodeKind.CODE, name=unit.name, attrs=attrs))
        graph.add_edge(Edge(src=project_ids[unit.repo], dst=unit.uid, label="CONTAINS"))

    resolved, resolution = resolve_references(kept_units, all_relations, contexts)
    for rel in resolved:
        assert rel.resolved is not None
        graph.add_edge(Edge(src=rel.src_uid, dst=rel.resolved, label=rel.kind))

    report.resolved = resolution.resolved
    report.unresolved = resolution.unresolved
    report.ambiguous = resolution.ambiguous
    report.diagnostics.extend(resolution.diagnostics)
    graph.validate()
    return graph, report

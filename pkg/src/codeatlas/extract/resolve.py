"""Cross-repository reference resolution.

Each raw relation's target text is resolved to a code-unit uid using, in
order: (1) exact qualified match, (2) import-context expansion for the source
unit's file, (3) unique simple-name match across the whole system. Qualified
references (containing '.' or ':') only resolve exactly; falling back to a
name match would happily bind external library types to unrelated local
units. Ambiguous simple names (two or more candidates) and unresolvable
targets are dropped and counted; self-references are dropped as noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .units import CodeUnit, Diagnostic, ImportContext, RawRelation


@dataclass
class ResolutionReport:
    resolved: int = 0
    unresolved: int = 0
    ambiguous: int = 0
    self_dropped: int = 0
    diagnostics: list[Diagnostic] = field(default_factory=list)


def resolve_references(
    units: list[CodeUnit],
    relations: list[RawRelation],
    contexts: dict[str, ImportContext],
) -> tuple[list[RawRelation], ResolutionReport]:
    report = ResolutionReport()
    by_uid: dict[str, CodeUnit] = {u.uid: u for u in units}
    by_name: dict[str, list[str]] = {}
    for unit in units:
        by_name.setdefault(unit.name, []).append(unit.uid)
    for uids in by_name.values():
        uids.sort()

    resolved: dict[tuple[str, str, str], RawRelation] = {}
    for rel in relations:
        src = by_uid.get(rel.src_uid)
        if src is None:
            report.diagnostics.append(
                Diagnostic("", f"relation from unknown unit {rel.src_uid!r} dropped")
            )
            report.unresolved += 1
            continue
        target = _resolve_one(rel, src, by_uid, by_name, contexts, report)
        if target is None:
            continue
        if target == rel.src_uid:
            report.self_dropped += 1
            continue
        key = (rel.src_uid, rel.kind, target)
        if key not in resolved:
            resolved[key] = RawRelation(
                src_uid=rel.src_uid, kind=rel.kind, target_ref=rel.target_ref, resolved=target
            )
    report.resolved = len(resolved)
    return [resolved[k] for k in sorted(resolved)], report


def _resolve_one(
    rel: RawRelation,
    src: CodeUnit,
    by_uid: dict[str, CodeUnit],
    by_name: dict[str, list[str]],
    contexts: dict[str, ImportContext],
    report: ResolutionReport,
) -> str | None:
    ref = rel.target_ref
    if ref in by_uid:
        return ref
    if "." in ref or ":" in ref:
        report.unresolved += 1
        return None

    ctx = contexts.get(src.file_key)
    if ctx is not None:
        direct = ctx.direct.get(ref)
        if direct is not None and direct in by_uid:
            return direct
        expansions = sorted({
            candidate
            for pattern in ctx.wildcards
            if (candidate := pattern.replace("{name}", ref)) in by_uid
        })
        if len(expansions) == 1:
            return expansions[0]
        if len(expansions) > 1:
            report.ambiguous += 1
            report.diagnostics.append(Diagnostic(
                src.file,
                f"reference {ref!r} matches several wildcard imports: {', '.join(expansions)}",
            ))
            return None

    candidates = by_name.get(ref, [])
    if len(candidates) == 1:
        return candidates[0]
    if len(candidates) > 1:
        report.ambiguous += 1
        report.diagnostics.append(Diagnostic(
            src.file,
            f"reference {ref!r} is ambiguous across the system: {', '.join(candidates)}",
        ))
        return None
    report.unresolved += 1
    return None

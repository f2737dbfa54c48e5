"""Declarative adapter reading unit/relation facts from a JSON file.

A repository using this adapter carries a single `facts.json` at its root:

    {
      "units": [{"uid": ..., "kind": ..., "name": ..., "file": ..., "span": [s, e]}, ...],
      "relations": [{"src": ..., "kind": ..., "target": ...}, ...]
    }

Unit sources are sliced from the referenced files when they exist under the
repo root (missing files yield an empty source plus a diagnostic). This is
the oracle backbone for testing everything downstream of extraction without
parser variance.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..units import (
    STRUCTURAL_RELATION_KINDS,
    CodeUnit,
    Diagnostic,
    ParseOutcome,
    RawRelation,
)
from .base import LanguageAdapter

_UNIT_KINDS = {"class", "interface", "function", "struct", "method"}


class FactsAdapter(LanguageAdapter):
    key = "facts"
    extensions = frozenset({".json"})

    def __init__(self, promote_methods: bool = False):
        self.promote_methods = promote_methods

    def claims(self, rel_path: str) -> bool:
        return Path(rel_path).name == "facts.json"

    def parse(self, rel_path: str, data: bytes, repo_root: Path | None = None) -> ParseOutcome:
        outcome = ParseOutcome()
        try:
            doc = json.loads(data.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            outcome.diagnostics.append(Diagnostic(rel_path, f"unreadable facts file: {exc}"))
            return outcome
        if not isinstance(doc, dict):
            outcome.diagnostics.append(Diagnostic(rel_path, "facts file must be a JSON object"))
            return outcome

        for i, raw in enumerate(doc.get("units", [])):
            try:
                uid = str(raw["uid"])
                kind = str(raw["kind"])
                name = str(raw["name"])
                file = str(raw["file"])
                span = (int(raw["span"][0]), int(raw["span"][1]))
            except (KeyError, TypeError, ValueError, IndexError) as exc:
                outcome.diagnostics.append(Diagnostic(rel_path, f"units[{i}] malformed: {exc}"))
                continue
            if kind not in _UNIT_KINDS:
                outcome.diagnostics.append(Diagnostic(rel_path, f"units[{i}] unknown kind {kind!r}"))
                continue
            if span[0] < 1 or span[0] > span[1]:
                outcome.diagnostics.append(Diagnostic(rel_path, f"units[{i}] bad span {span}"))
                continue
            source = ""
            if repo_root is not None:
                target = repo_root / file
                if target.is_file():
                    lines = target.read_text(encoding="utf-8", errors="replace").splitlines()
                    source = "\n".join(lines[span[0] - 1:span[1]])
                else:
                    outcome.diagnostics.append(
                        Diagnostic(rel_path, f"units[{i}] references missing file {file!r}")
                    )
            outcome.units.append(CodeUnit(
                uid=uid, unit_kind=kind, name=name, file=file, span=span,
                source=source, language=self.key,
            ))

        for i, raw in enumerate(doc.get("relations", [])):
            try:
                src = str(raw["src"])
                kind = str(raw["kind"])
                target = str(raw["target"])
            except (KeyError, TypeError) as exc:
                outcome.diagnostics.append(Diagnostic(rel_path, f"relations[{i}] malformed: {exc}"))
                continue
            if kind not in STRUCTURAL_RELATION_KINDS:
                outcome.diagnostics.append(
                    Diagnostic(rel_path, f"relations[{i}] unknown kind {kind!r}")
                )
                continue
            outcome.relations.append(RawRelation(src_uid=src, kind=kind, target_ref=target))
        return outcome

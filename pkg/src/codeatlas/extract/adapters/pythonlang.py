"""Adapter for Python sources built on the stdlib ast module.

Units are module-level classes and functions with uid `module.path:qualname`
(the module path is the repo-relative file path with separators replaced by
dots and the .py suffix removed). Relations: base classes and uses of
imported names -> DEPENDS_ON, call expressions -> CALLS. Import statements
are normalized by the adapter into uid-shaped targets so the resolver only
ever sees exact or simple references.
"""

from __future__ import annotations

import ast
from pathlib import Path

from ..units import CodeUnit, Diagnostic, ParseOutcome, RawRelation
from .base import LanguageAdapter


def _module_path(rel_path: str) -> str:
    path = Path(rel_path)
    return ".".join(path.parts[:-1] + (path.stem,))


class PythonAdapter(LanguageAdapter):
    key = "python"
    extensions = frozenset({".py"})

    def __init__(self, promote_methods: bool = False):
        # methods stay attached to their class for Python; flag kept for parity
        self.promote_methods = promote_methods

    def parse(self, rel_path: str, data: bytes, repo_root: Path | None = None) -> ParseOutcome:
        outcome = ParseOutcome()
        text = self.decode(rel_path, data, outcome)
        if not text.strip():
            return outcome
        try:
            tree = ast.parse(text)
        except SyntaxError as exc:
            outcome.diagnostics.append(
                Diagnostic(rel_path, f"syntax error at line {exc.lineno}: {exc.msg}")
            )
            return outcome

        module = _module_path(rel_path)
        lines = text.splitlines()
        module_aliases: dict[str, str] = {}

        for stmt in tree.body:
            if isinstance(stmt, ast.Import):
                for alias in stmt.names:
                    module_aliases[alias.asname or alias.name] = alias.name
            elif isinstance(stmt, ast.ImportFrom) and stmt.module and stmt.level == 0:
                for alias in stmt.names:
                    if alias.name == "*":
                        outcome.imports.wildcards.append(stmt.module + ":{name}")
                    else:
                        outcome.imports.direct[alias.asname or alias.name] = (
                            f"{stmt.module}:{alias.name}"
                        )

        relations: set[tuple[str, str, str]] = set()
        for stmt in tree.body:
            if isinstance(stmt, ast.ClassDef):
                unit_kind = "class"
            elif isinstance(stmt, (ast.FunctionDef, ast.AsyncFunctionDef)):
                unit_kind = "function"
            else:
                continue
            start = min([stmt.lineno] + [d.lineno for d in stmt.decorator_list])
            end = stmt.end_lineno or stmt.lineno
            uid = f"{module}:{stmt.name}"
            methods = []
            if isinstance(stmt, ast.ClassDef):
                methods = sorted({
                    child.name for child in stmt.body
                    if isinstance(child, (ast.FunctionDef, ast.AsyncFunctionDef))
                })
                for base in stmt.bases:
                    target = self._ref_of(base, outcome, module_aliases)
                    if target:
                        relations.add((uid, "DEPENDS_ON", target))
            outcome.units.append(CodeUnit(
                uid=uid, unit_kind=unit_kind, name=stmt.name, file=rel_path,
                span=(start, end), source="\n".join(lines[start - 1:end]),
                language=self.key, methods=methods,
            ))
            for node in ast.walk(stmt):
                if isinstance(node, ast.Call):
                    target = self._ref_of(node.func, outcome, module_aliases)
                    if target:
                        relations.add((uid, "CALLS", target))
                elif isinstance(node, ast.Name) and isinstance(node.ctx, ast.Load):
                    qualified = outcome.imports.direct.get(node.id)
                    if qualified:
                        relations.add((uid, "DEPENDS_ON", qualified))

        unit_uids = {u.uid for u in outcome.units}
        outcome.relations = [
            RawRelation(src_uid=s, kind=k, target_ref=t)
            for s, k, t in sorted(relations)
            if s in unit_uids and t != s
        ]
        return outcome

    @staticmethod
    def _ref_of(node: ast.expr, outcome: ParseOutcome, module_aliases: dict[str, str]) -> str | None:
        if isinstance(node, ast.Name):
            return outcome.imports.direct.get(node.id, node.id)
        dotted = _flatten_attribute(node)
        if dotted and "." in dotted:
            prefix, leaf = dotted.rsplit(".", 1)
            base = module_aliases.get(prefix)
            if base:
                return f"{base}:{leaf}"
        return None


def _flatten_attribute(node: ast.expr) -> str | None:
    parts: list[str] = []
    while isinstance(node, ast.Attribute):
        parts.append(node.attr)
        node = node.value
    if isinstance(node, ast.Name):
        parts.append(node.id)
        return ".".join(reversed(parts))
    return None

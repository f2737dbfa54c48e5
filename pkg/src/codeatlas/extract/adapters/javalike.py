"""Adapter for a Java-like language subset.

Recognized constructs: package declarations, imports (direct, wildcard),
top-level class/interface/enum declarations, field declarations, `new Type(...)`
constructor calls and `Type.method(...)` static-style invocations. Relation
mapping: `implements` -> IMPLEMENTS, `extends` -> DEPENDS_ON (the alternative
reading, inheritance as IMPLEMENTS, is noted in the README), imports and field
types -> DEPENDS_ON, invocations -> CALLS.

The scanner works on a masked copy of the source (comments, string literals
and annotations blanked out, newlines preserved) so offsets map 1:1 back to
the original text. It never raises on malformed input; unbalanced braces and
similar problems become diagnostics with best-effort spans.
"""

from __future__ import annotations

import re
from pathlib import Path

from ..units import CodeUnit, Diagnostic, ImportContext, ParseOutcome, RawRelation
from .base import LanguageAdapter

_PACKAGE_RE = re.compile(r"^\s*package\s+([\w.]+)\s*;", re.MULTILINE)
_IMPORT_RE = re.compile(r"^\s*import\s+(static\s+)?([\w.]+?)(\.\*)?\s*;", re.MULTILINE)
_DECL_RE = re.compile(
    r"^[ \t]*(?:(?:public|protected|private|abstract|static|final|strictfp)\s+)*"
    r"(class|interface|enum)\s+([A-Za-z_]\w*)",
    re.MULTILINE,
)
_FIELD_RE = re.compile(
    r"^\s*(?:(?:public|private|protected|static|final|transient|volatile)\s+)*"
    r"([A-Z][\w.]*)(?:<[^;{}=]*>)?(?:\[\])?\s+\w+\s*(?:=[^;]*)?;",
    re.MULTILINE,
)
_METHOD_RE = re.compile(
    r"^\s*(?:(?:public|private|protected|static|final|abstract|synchronized|native|default)\s+)*"
    r"(?:<[^>]+>\s+)?(?:[\w.$]+(?:<[^>]*>)?(?:\[\])?)\s+([a-z]\w*)\s*\(",
    re.MULTILINE,
)
_NEW_RE = re.compile(r"\bnew\s+([A-Z][\w.]*)\s*\(")
_STATIC_CALL_RE = re.compile(r"\b([A-Z]\w*)\s*\.\s*\w+\s*\(")
_ANNOTATION_RE = re.compile(r"@\w+(?:\([^()]*\))?")


def _mask(text: str) -> str:
    """Blank out comments, string/char literals, and annotations in place."""
    out = list(text)
    i, n = 0, len(text)
    mode: str | None = None
    while i < n:
        ch = text[i]
        if mode is None:
            nxt = text[i + 1] if i + 1 < n else ""
            if ch == "/" and nxt == "/":
                mode = "line"
                out[i] = out[i + 1] = " "
                i += 2
            elif ch == "/" and nxt == "*":
                mode = "block"
                out[i] = out[i + 1] = " "
                i += 2
            elif ch == '"':
                mode = "dq"
                out[i] = " "
                i += 1
            elif ch == "'":
                mode = "sq"
                out[i] = " "
                i += 1
            else:
                i += 1
        elif mode == "line":
            if ch == "\n":
                mode = None
            else:
                out[i] = " "
            i += 1
        elif mode == "block":
            if ch == "*" and i + 1 < n and text[i + 1] == "/":
                out[i] = out[i + 1] = " "
                mode = None
                i += 2
            else:
                if ch != "\n":
                    out[i] = " "
                i += 1
        else:  # inside a string or char literal
            if ch == "\\" and i + 1 < n:
                out[i] = " "
                if text[i + 1] != "\n":
                    out[i + 1] = " "
                i += 2
            elif (mode == "dq" and ch == '"') or (mode == "sq" and ch == "'"):
                out[i] = " "
                mode = None
                i += 1
            else:
                if ch != "\n":
                    out[i] = " "
                i += 1
    masked = "".join(out)
    return _ANNOTATION_RE.sub(lambda m: " " * len(m.group()), masked)


def _strip_generic(name: str) -> str:
    return name.split("<", 1)[0].strip()


def _split_type_list(raw: str) -> list[str]:
    names = []
    depth = 0
    current = []
    for ch in raw:
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
        elif ch == "," and depth == 0:
            names.append("".join(current).strip())
            current = []
            continue
        current.append(ch)
    tail = "".join(current).strip()
    if tail:
        names.append(tail)
    return [n for n in (_strip_generic(n) for n in names) if n]


class JavaLikeAdapter(LanguageAdapter):
    key = "java"
    extensions = frozenset({".java"})

    def __init__(self, promote_methods: bool = False):
        self.promote_methods = promote_methods

    def parse(self, rel_path: str, data: bytes, repo_root: Path | None = None) -> ParseOutcome:
        outcome = ParseOutcome()
        text = self.decode(rel_path, data, outcome)
        if not text.strip():
            return outcome
        masked = _mask(text)
        lines = text.splitlines()

        package = ""
        pkg_match = _PACKAGE_RE.search(masked)
        if pkg_match:
            package = pkg_match.group(1)

        for imp in _IMPORT_RE.finditer(masked):
            qualified, wildcard = imp.group(2), imp.group(3)
            if wildcard:
                outcome.imports.wildcards.append(qualified + ".{name}")
            else:
                outcome.imports.direct[qualified.rsplit(".", 1)[-1]] = qualified

        relations: set[tuple[str, str, str]] = set()

        for decl in _DECL_RE.finditer(masked):
            if _brace_depth(masked, decl.start()) != 0:
                continue  # nested declaration; subset covers top level only
            decl_kind, name = decl.group(1), decl.group(2)
            unit_kind = "interface" if decl_kind == "interface" else "class"
            uid = f"{package}.{name}" if package else name
            open_idx = masked.find("{", decl.end())
            if open_idx < 0:
                outcome.diagnostics.append(Diagnostic(rel_path, f"no body found for {name}"))
                continue
            close_idx = _match_brace(masked, open_idx)
            if close_idx < 0:
                outcome.diagnostics.append(
                    Diagnostic(rel_path, f"unbalanced braces in {name}; span extends to EOF")
                )
                close_idx = len(masked) - 1
            start_line = masked.count("\n", 0, decl.start()) + 1
            end_line = masked.count("\n", 0, close_idx) + 1
            source = "\n".join(lines[start_line - 1:end_line])
            header = masked[decl.end():open_idx]
            body = masked[open_idx + 1:close_idx]

            methods = _collect_methods(body)
            unit = CodeUnit(
                uid=uid, unit_kind=unit_kind, name=name, file=rel_path,
                span=(start_line, end_line), source=source,
                language=self.key, methods=methods,
            )
            outcome.units.append(unit)

            ext_match = re.search(r"\bextends\s+([^{]+?)(?=\bimplements\b|$)", header)
            if ext_match:
                for target in _split_type_list(ext_match.group(1)):
                    relations.add((uid, "DEPENDS_ON", target))
            impl_match = re.search(r"\bimplements\s+([^{]+)$", header)
            if impl_match:
                for target in _split_type_list(impl_match.group(1)):
                    relations.add((uid, "IMPLEMENTS", target))
            for qualified in outcome.imports.direct.values():
                relations.add((uid, "DEPENDS_ON", qualified))
            for field in _FIELD_RE.finditer(body):
                relations.add((uid, "DEPENDS_ON", field.group(1)))
            for ctor in _NEW_RE.finditer(body):
                relations.add((uid, "CALLS", ctor.group(1)))
            for call in _STATIC_CALL_RE.finditer(body):
                relations.add((uid, "CALLS", call.group(1)))

            if self.promote_methods:
                seen: dict[str, int] = {}
                for method_name in methods:
                    suffix = ""
                    if method_name in seen:
                        seen[method_name] += 1
                        suffix = f"${seen[method_name]}"
                    else:
                        seen[method_name] = 1
                    method_uid = f"{uid}#{method_name}{suffix}"
                    outcome.units.append(CodeUnit(
                        uid=method_uid, unit_kind="method", name=method_name,
                        file=rel_path, span=(start_line, end_line), source=source,
                        language=self.key,
                    ))
                    # anchor promoted methods to their class
                    relations.add((method_uid, "DEPENDS_ON", uid))

        outcome.relations = [
            RawRelation(src_uid=s, kind=k, target_ref=t) for s, k, t in sorted(relations)
        ]
        return outcome


def _collect_methods(body: str) -> list[str]:
    names = []
    for m in _METHOD_RE.finditer(body):
        if _brace_depth(body, m.start()) == 0:
            names.append(m.group(1))
    return sorted(set(names))


def _brace_depth(text: str, idx: int) -> int:
    return text.count("{", 0, idx) - text.count("}", 0, idx)


def _match_brace(text: str, open_idx: int) -> int:
    depth = 0
    for i in range(open_idx, len(text)):
        if text[i] == "{":
            depth += 1
        elif text[i] == "}":
            depth -= 1
            if depth == 0:
                return i
    return -1

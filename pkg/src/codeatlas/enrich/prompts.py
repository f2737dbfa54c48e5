"""Prompt template loading and rendering.

Templates are versioned text files with {{placeholder}} slots. The combined
hash of all templates is recorded on the System node after enrichment so a
snapshot documents which prompt set produced it.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from pathlib import Path

_TEMPLATE_DIR = Path(__file__).resolve().parent / "templates"
_PLACEHOLDER_RE = re.compile(r"\{\{(\w+)\}\}")

TEMPLATE_NAMES = ("code_summary", "project_summary", "system_summary", "entity_extraction")


@dataclass(frozen=True)
class PromptTemplates:
    code_summary: str
    project_summary: str
    system_summary: str
    entity_extraction: str
    version_hash: str

    def render(self, template: str, **values: str) -> str:
        text = getattr(self, template)

        def replace(match: re.Match) -> str:
            key = match.group(1)
            if key not in values:
                raise KeyError(f"template {template!r} placeholder {key!r} not provided")
            return values[key]

        return _PLACEHOLDER_RE.sub(replace, text)


def load_templates(directory: Path | None = None) -> PromptTemplates:
    base = directory or _TEMPLATE_DIR
    texts = {}
    digest = hashlib.sha256()
    for name in TEMPLATE_NAMES:
        text = (base / f"{name}.txt").read_text(encoding="utf-8")
        texts[name] = text
        digest.update(name.encode())
        digest.update(text.encode("utf-8"))
    return PromptTemplates(version_hash=digest.hexdigest()[:16], **texts)

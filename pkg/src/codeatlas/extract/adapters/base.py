"""Language adapter interface.

Adapters must be deterministic (identical bytes in, identical outcome out)
and total: malformed input becomes diagnostics and best-effort units, never
an exception that aborts the pipeline.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from pathlib import Path

from ..units import Diagnostic, ParseOutcome


class LanguageAdapter(ABC):
    #: registry key, e.g. "java"
    key: str = ""
    #: file extensions this adapter claims, e.g. {".java"}
    extensions: frozenset[str] = frozenset()

    def claims(self, rel_path: str) -> bool:
        return Path(rel_path).suffix in self.extensions

    @abstractmethod
    def parse(self, rel_path: str, data: bytes, repo_root: Path | None = None) -> ParseOutcome:
        """Parse one file into units and raw relations."""

    @staticmethod
    def decode(rel_path: str, data: bytes, outcome: ParseOutcome) -> str:
        """UTF-8 decode with lossy replacement, recording a diagnostic."""
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError:
            outcome.diagnostics.append(
                Diagnostic(rel_path, "invalid UTF-8; decoded with replacement characters")
            )
            return data.decode("utf-8", errors="replace")

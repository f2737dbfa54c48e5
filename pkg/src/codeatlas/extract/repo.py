"""Repository scanning."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import IoFailure
from .adapters.base import LanguageAdapter
from .units import Diagnostic

DEFAULT_MAX_FILE_BYTES = 1 << 20  # 1 MiB cap against pathological inputs


@dataclass
class RepoSpec:
    """One repository to ingest. `root` must be a pre-cloned local directory."""

    name: str
    root: Path
    language: str
    include: list[str] = field(default_factory=list)
    exclude: list[str] = field(default_factory=list)


@dataclass
class ScanResult:
    files: list[str]  # repo-relative posix paths, lexicographically sorted
    skipped_large: list[str] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)


def _glob_match(rel_path: str, pattern: str) -> bool:
    # fnmatch semantics: '*' crosses directory separators, so patterns like
    # '**/test/**' behave as expected without a dedicated ** implementation
    import fnmatch

    return fnmatch.fnmatch(rel_path, pattern)


def scan_repository(
    spec: RepoSpec,
    adapter: LanguageAdapter,
    max_bytes: int = DEFAULT_MAX_FILE_BYTES,
) -> ScanResult:
    """Deterministic file listing honoring adapter filter and include/exclude globs."""
    root = Path(spec.root)
    if not root.is_dir():
        raise IoFailure(f"repository root is not a directory: {root}")
    result = ScanResult(files=[])
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for filename in sorted(filenames):
            full = Path(dirpath) / filename
            rel = full.relative_to(root).as_posix()
            if not adapter.claims(rel):
                continue
            if spec.include and not any(_glob_match(rel, p) for p in spec.include):
                continue
            if any(_glob_match(rel, p) for p in spec.exclude):
                continue
            try:
                size = full.stat().st_size
            except OSError as exc:
                result.diagnostics.append(Diagnostic(rel, f"stat failed: {exc}"))
                continue
            if size > max_bytes:
                result.skipped_large.append(rel)
                result.diagnostics.append(
                    Diagnostic(rel, f"skipped: {size} bytes exceeds cap of {max_bytes}")
                )
                continue
            result.files.append(rel)
    result.files.sort()
    return result

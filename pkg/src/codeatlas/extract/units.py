"""Data carriers shared by the extraction phase."""

from __future__ import annotations

from dataclasses import dataclass, field

STRUCTURAL_RELATION_KINDS = ("DEPENDS_ON", "CALLS", "IMPLEMENTS")


@dataclass
class Diagnostic:
    """Non-fatal extraction problem, attached to a file or unit."""

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


@dataclass
class CodeUnit:
    """A language-specific meaningful container (class, function, struct...).

    `uid` is the globally unique qualified identifier; `span` is 1-based and
    inclusive; `source` is the verbatim file slice covered by the span.
    """

    uid: str
    unit_kind: str  # class | interface | function | struct | method
    name: str
    file: str  # repo-relative posix path
    span: tuple[int, int]
    source: str
    language: str = ""
    repo: str = ""  # filled by the scanner/builder
    methods: list[str] = field(default_factory=list)

    @property
    def file_key(self) -> str:
        return f"{self.repo}:{self.file}"


@dataclass
class RawRelation:
    """Typed structural relation whose target may still be unresolved text."""

    src_uid: str
    kind: str  # DEPENDS_ON | CALLS | IMPLEMENTS
    target_ref: str
    resolved: str | None = None


@dataclass
class ImportContext:
    """Per-file import information used during reference resolution.

    `direct` maps a simple name to the qualified identifier it was imported
    as; `wildcards` holds qualifier prefixes (e.g. from `import pkg.*;`) that
    are tried as `<prefix>.<name>` expansions.
    """

    direct: dict[str, str] = field(default_factory=dict)
    wildcards: list[str] = field(default_factory=list)


@dataclass
class ParseOutcome:
    """Everything an adapter learned from one file."""

    units: list[CodeUnit] = field(default_factory=list)
    relations: list[RawRelation] = field(default_factory=list)
    imports: ImportContext = field(default_factory=ImportContext)
    diagnostics: list[Diagnostic] = field(default_factory=list)

"""Exception hierarchy shared across the package.

Every error raised by codeatlas derives from CodeAtlasError so callers can
catch the whole family at an application boundary (CLI, HTTP handlers).
"""

from __future__ import annotations


class CodeAtlasError(Exception):
    """Base class for all codeatlas errors."""


# --- graph store ---------------------------------------------------------

class GraphError(CodeAtlasError):
    """Base class for graph-store errors."""


class DuplicateId(GraphError):
    """A node with this id already exists."""


class UnknownId(GraphError):
    """No node with this id exists."""


class UnknownEndpoint(GraphError):
    """An edge references a node id that is not in the graph."""


class SchemaViolation(GraphError):
    """Edge label/kind combination not permitted, or an invariant broke."""


class ReadOnlyGraph(GraphError):
    """Mutation attempted on a frozen graph view."""


# --- query DSL -----------------------------------------------------------

class ParseError(CodeAtlasError):
    """Query text rejected; carries the character offset and expectation."""

    def __init__(self, message: str, position: int, expected: list[str] | None = None):
        self.position = position
        self.expected = expected or []
        detail = f"at {position}: {message}"
        if self.expected:
            detail += f" (expected {', '.join(self.expected)})"
        super().__init__(detail)


# --- persistence ----------------------------------------------------------

class IoFailure(CodeAtlasError):
    """Underlying file system operation failed."""


class VersionMismatch(CodeAtlasError):
    """Snapshot was written with an unsupported schema version."""


class CorruptSnapshot(CodeAtlasError):
    """Snapshot failed structural or checksum validation."""


# --- extraction -----------------------------------------------------------

class NoAdapter(CodeAtlasError):
    """No language adapter registered under the requested key."""


class DuplicateProjectName(CodeAtlasError):
    """Two repository specs share a project name."""


# --- providers ------------------------------------------------------------

class ProviderFailure(CodeAtlasError):
    """Completion or embedding call failed after retries."""


class ReplayMiss(ProviderFailure):
    """Replay transcript has no record for the requested prompt."""


class MalformedExtraction(CodeAtlasError):
    """Entity-extraction response stayed invalid after repair retries."""


# --- index & agent ----------------------------------------------------------

class EmptyIndex(CodeAtlasError):
    """No embedded nodes of the requested kind to search over."""


class NoEntities(CodeAtlasError):
    """The graph has no Entity nodes (semantic layer not applied)."""


class MalformedAction(CodeAtlasError):
    """Provider text contained no well-formed action block."""


class NotACodeNode(CodeAtlasError):
    """Operation requires a Code node but another kind was addressed."""


# --- application shell -------------------------------------------------------

class ConfigError(CodeAtlasError):
    """System configuration invalid (CLI exit code 2)."""


class BuildError(CodeAtlasError):
    """Pipeline build failed (CLI exit code 3)."""


class EvalError(CodeAtlasError):
    """Evaluation input files invalid."""


class UnknownQuestionId(EvalError):
    """A rating references a question id with no recorded answer."""

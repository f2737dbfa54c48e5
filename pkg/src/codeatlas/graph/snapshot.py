"""Snapshot persistence for CodeGraph.

File layout (UTF-8 text, one record per line, trailing CRC):

    CLGS <schema_version> <json system name>
    N <json id> <Kind> <json name> <json attrs> [<json description>]
    E <json src> <LABEL> <json dst> <json attrs>
    V <json id> <dim> <base64 little-endian float32s>
    C <crc32 decimal of every prior byte>

Node records are sorted by id, edge records by (src, label, dst), embedding
records by id, which makes saves byte-reproducible for equal graphs. All JSON
fields are emitted with sorted keys, compact separators, and ASCII escapes.
"""

from __future__ import annotations

import base64
import json
import zlib
from pathlib import Path

import numpy as np

from ..errors import CorruptSnapshot, IoFailure, VersionMismatch
from .model import CodeGraph, Edge, Node, NodeKind

MAGIC = "CLGS"
SCHEMA_VERSION = 1

_decoder = json.JSONDecoder()


def _dump(value) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def snapshot_bytes(graph: CodeGraph) -> bytes:
    """Serialize a validated graph to snapshot bytes."""
    graph.validate()
    lines = [f"{MAGIC} {SCHEMA_VERSION} {_dump(graph.meta.system_name)}"]
    for node in graph.iter_nodes():
        parts = ["N", _dump(node.id), node.kind.value, _dump(node.name), _dump(node.attrs)]
        if node.description is not None:
            parts.append(_dump(node.description))
        lines.append(" ".join(parts))
    for edge in graph.edges():
        lines.append(
            " ".join(["E", _dump(edge.src), edge.label, _dump(edge.dst), _dump(edge.attrs)])
        )
    for node in graph.iter_nodes():
        if node.embedding is None:
            continue
        raw = node.embedding.astype("<f4").tobytes()
        encoded = base64.b64encode(raw).decode("ascii")
        lines.append(f"V {_dump(node.id)} {node.embedding.shape[0]} {encoded}")
    body = ("\n".join(lines) + "\n").encode("utf-8")
    crc = zlib.crc32(body)
    return body + f"C {crc}\n".encode("ascii")


def save_snapshot(graph: CodeGraph, path: str | Path) -> None:
    data = snapshot_bytes(graph)
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise IoFailure(f"cannot write snapshot {path}: {exc}") from exc


class _LineReader:
    """Sequential field reader over one record line."""

    def __init__(self, line: str, lineno: int):
        self.line = line
        self.lineno = lineno
        self.pos = 0

    def _skip_space(self) -> None:
        while self.pos < len(self.line) and self.line[self.pos] == " ":
            self.pos += 1

    def bare(self) -> str:
        self._skip_space()
        start = self.pos
        while self.pos < len(self.line) and self.line[self.pos] != " ":
            self.pos += 1
        if start == self.pos:
            raise CorruptSnapshot(f"line {self.lineno}: missing field")
        return self.line[start:self.pos]

    def json(self):
        self._skip_space()
        try:
            value, end = _decoder.raw_decode(self.line, self.pos)
        except ValueError as exc:
            raise CorruptSnapshot(f"line {self.lineno}: bad JSON field: {exc}") from exc
        self.pos = end
        return value

    def exhausted(self) -> bool:
        self._skip_space()
        return self.pos >= len(self.line)


def graph_from_bytes(data: bytes) -> CodeGraph:
    if not data.startswith(MAGIC.encode("ascii") + b" "):
        raise CorruptSnapshot("bad magic; not a graph snapshot")
    head, sep, tail = data.rpartition(b"\nC ")
    if not sep:
        raise CorruptSnapshot("missing checksum record")
    body = head + b"\n"
    try:
        stored_crc = int(tail.strip().decode("ascii"))
    except ValueError as exc:
        raise CorruptSnapshot(f"bad checksum record: {exc}") from exc

    text = body.decode("utf-8")
    lines = text.splitlines()
    header = _LineReader(lines[0], 1)
    header.bare()  # magic, checked above
    try:
        version = int(header.bare())
    except ValueError as exc:
        raise CorruptSnapshot(f"bad schema version: {exc}") from exc
    if version != SCHEMA_VERSION:
        raise VersionMismatch(f"snapshot schema version {version}, supported {SCHEMA_VERSION}")
    if zlib.crc32(body) != stored_crc:
        raise CorruptSnapshot("checksum mismatch; snapshot truncated or altered")

    system_name = header.json()
    graph = CodeGraph(str(system_name))
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        reader = _LineReader(line, lineno)
        tag = reader.bare()
        if tag == "N":
            nid = str(reader.json())
            kind_text = reader.bare()
            try:
                kind = NodeKind(kind_text)
            except ValueError:
                raise CorruptSnapshot(f"line {lineno}: unknown node kind {kind_text!r}") from None
            name = str(reader.json())
            attrs = reader.json()
            description = None if reader.exhausted() else str(reader.json())
            graph.add_node(
                Node(id=nid, kind=kind, name=name, description=description, attrs=dict(attrs))
            )
        elif tag == "E":
            src = str(reader.json())
            label = reader.bare()
            dst = str(reader.json())
            attrs = reader.json()
            graph.add_edge(Edge(src=src, dst=dst, label=label, attrs=dict(attrs)))
        elif tag == "V":
            nid = str(reader.json())
            dim = int(reader.bare())
            raw = base64.b64decode(reader.bare())
            vector = np.frombuffer(raw, dtype="<f4").copy()
            if vector.shape[0] != dim:
                raise CorruptSnapshot(f"line {lineno}: embedding dim {vector.shape[0]} != {dim}")
            graph.set_embedding(nid, vector)
        else:
            raise CorruptSnapshot(f"line {lineno}: unknown record tag {tag!r}")
    graph.validate()
    return graph


def load_snapshot(path: str | Path) -> CodeGraph:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise IoFailure(f"cannot read snapshot {path}: {exc}") from exc
    return graph_from_bytes(data)

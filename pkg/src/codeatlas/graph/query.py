"""Mini graph-query DSL: a single path pattern with filters and a return clause.

Grammar (whitespace-insensitive between tokens):

    query     := "MATCH" pattern "RETURN" retclause
    pattern   := nodepat (edgepat nodepat)?
    nodepat   := "(" var (":" kind)? ("{" key ":" qstring ("," key ":" qstring)* "}")? ")"
    edgepat   := "-[" (":" label ("|" label)*)? ("*" int ".." int)? "]->"
    retclause := "COUNT" | var ("," var)*

Identifiers match [A-Za-z_][A-Za-z0-9_]*; strings are double-quoted with
backslash escapes. The filter key "name" matches the node's display name;
any other key matches the node's attrs map.

Semantics: a result binding is a distinct assignment of node ids to the
pattern variables such that a walk of length within the depth range exists
whose every edge label is in the edge-label set (any label when the set is
omitted). An omitted depth range means exactly one hop. Rows are bindings
projected onto the RETURN variables, ordered lexicographically by the
projected NodeId tuple; COUNT is the number of bindings. Unknown labels or
kinds in filters are not errors; they simply match nothing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError
from .model import CodeGraph, Node, NodeId, NodeKind

MAX_DEPTH = 8

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow_open>-\[)
  | (?P<arrow_close>\]->)
  | (?P<dotdot>\.\.)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:\\.|[^"\\])*")
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<lbrace>\{)
  | (?P<rbrace>\})
  | (?P<colon>:)
  | (?P<comma>,)
  | (?P<pipe>\|)
  | (?P<star>\*)
    """,
    re.VERBOSE,
)

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


@dataclass(frozen=True)
class NodePattern:
    var: str
    kind: str | None
    props: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class EdgePattern:
    labels: tuple[str, ...]  # empty tuple = any label
    lo: int
    hi: int


@dataclass(frozen=True)
class GraphQuery:
    src: NodePattern
    edge: EdgePattern | None
    dst: NodePattern | None
    returns: tuple[str, ...] | None  # None = COUNT

    @property
    def variables(self) -> tuple[str, ...]:
        if self.dst is None:
            return (self.src.var,)
        return (self.src.var, self.dst.var)


@dataclass(frozen=True)
class QueryRows:
    """Either a bare count or ordered projected rows of node ids."""

    columns: tuple[str, ...]
    rows: tuple[tuple[NodeId, ...], ...]
    count: int | None = None

    @property
    def is_count(self) -> bool:
        return self.count is not None


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = match.lastgroup or ""
        if kind != "ws":
            tokens.append(Token(kind, match.group(), pos))
        pos = match.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


def _unquote(raw: str, pos: int) -> str:
    body = raw[1:-1]
    out: list[str] = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            if i + 1 >= len(body):
                raise ParseError("dangling escape in string", pos)
            out.append(_ESCAPES.get(body[i + 1], body[i + 1]))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self, kind: str, expected: str) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != kind:
            raise ParseError(
                f"got {tok.text!r}" if tok.kind != "eof" else "got end of query",
                tok.pos,
                [expected],
            )
        self.i += 1
        return tok

    def take_keyword(self, word: str) -> None:
        tok = self.peek()
        if tok.kind != "ident" or tok.text != word:
            raise ParseError(
                f"got {tok.text!r}" if tok.kind != "eof" else "got end of query",
                tok.pos,
                [word],
            )
        self.i += 1

    def parse(self) -> GraphQuery:
        self.take_keyword("MATCH")
        src = self.parse_nodepat()
        edge = None
        dst = None
        if self.peek().kind == "arrow_open":
            edge = self.parse_edgepat()
            dst = self.parse_nodepat()
        returns = self.parse_return(src, dst)
        self.take("eof", "end of query")
        return GraphQuery(src=src, edge=edge, dst=dst, returns=returns)

    def parse_nodepat(self) -> NodePattern:
        self.take("lparen", "(")
        var = self.take("ident", "variable name").text
        if var in ("MATCH", "RETURN", "COUNT"):
            raise ParseError(f"{var} is reserved", self.tokens[self.i - 1].pos, ["variable name"])
        kind: str | None = None
        if self.peek().kind == "colon":
            self.i += 1
            kind = self.take("ident", "node kind").text
        props: list[tuple[str, str]] = []
        if self.peek().kind == "lbrace":
            self.i += 1
            while True:
                key = self.take("ident", "filter key").text
                self.take("colon", ":")
                tok = self.take("string", "quoted string")
                props.append((key, _unquote(tok.text, tok.pos)))
                if self.peek().kind == "comma":
                    self.i += 1
                    continue
                break
            self.take("rbrace", "}")
        self.take("rparen", ")")
        return NodePattern(var=var, kind=kind, props=tuple(props))

    def parse_edgepat(self) -> EdgePattern:
        self.take("arrow_open", "-[")
        labels: list[str] = []
        if self.peek().kind == "colon":
            self.i += 1
            labels.append(self.take("ident", "edge label").text)
            while self.peek().kind == "pipe":
                self.i += 1
                labels.append(self.take("ident", "edge label").text)
        lo, hi = 1, 1
        if self.peek().kind == "star":
            star = self.take("star", "*")
            lo = int(self.take("int", "depth lower bound").text)
            self.take("dotdot", "..")
            hi = int(self.take("int", "depth upper bound").text)
            if not (1 <= lo <= hi <= MAX_DEPTH):
                raise ParseError(
                    f"depth range {lo}..{hi} out of bounds (1 <= lo <= hi <= {MAX_DEPTH})",
                    star.pos,
                )
        self.take("arrow_close", "]->")
        return EdgePattern(labels=tuple(labels), lo=lo, hi=hi)

    def parse_return(self, src: NodePattern, dst: NodePattern | None) -> tuple[str, ...] | None:
        self.take_keyword("RETURN")
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "COUNT":
            self.i += 1
            return None
        declared = {src.var} | ({dst.var} if dst else set())
        out: list[str] = []
        while True:
            tok = self.take("ident", "variable name or COUNT")
            if tok.text not in declared:
                raise ParseError(
                    f"variable {tok.text!r} not bound in the pattern",
                    tok.pos,
                    sorted(declared),
                )
            out.append(tok.text)
            if self.peek().kind == "comma":
                self.i += 1
                continue
            return tuple(out)


def parse_query(text: str) -> GraphQuery:
    """Parse query text, raising ParseError with position and expectations."""
    return _Parser(text).parse()


def _node_matches(node: Node, pat: NodePattern) -> bool:
    if pat.kind is not None and node.kind.value != pat.kind:
        return False
    for key, value in pat.props:
        if key == "name":
            if node.name != value:
                return False
        elif node.attrs.get(key) != value:
            return False
    return True


def _walk_targets(graph: CodeGraph, start: NodeId, edge: EdgePattern) -> set[NodeId]:
    """Node ids reachable from `start` by a walk of length in [lo, hi]."""
    wanted = set(edge.labels) if edge.labels else None
    result: set[NodeId] = set()
    frontier = {start}
    for depth in range(1, edge.hi + 1):
        nxt: set[NodeId] = set()
        for nid in frontier:
            for e in graph.out_edges(nid, labels=wanted):
                nxt.add(e.dst)
        if not nxt:
            break
        if depth >= edge.lo:
            result |= nxt
        frontier = nxt
    return result


def execute_query(graph: CodeGraph, text: str) -> QueryRows:
    """Parse and run a query against the graph.

    Unknown labels or kinds yield zero rows rather than errors; malformed
    query text raises ParseError.
    """
    query = parse_query(text)
    bindings: list[tuple[NodeId, ...]] = []
    if query.edge is None or query.dst is None:
        for node in graph.iter_nodes():
            if _node_matches(node, query.src):
                bindings.append((node.id,))
    else:
        for node in graph.iter_nodes():
            if not _node_matches(node, query.src):
                continue
            for target in sorted(_walk_targets(graph, node.id, query.edge)):
                if _node_matches(graph.node(target), query.dst):
                    bindings.append((node.id, target))

    if query.returns is None:
        return QueryRows(columns=(), rows=(), count=len(bindings))

    var_index = {var: i for i, var in enumerate(query.variables)}
    projected = [tuple(b[var_index[v]] for v in query.returns) for b in bindings]
    projected.sort()
    return QueryRows(columns=query.returns, rows=tuple(projected))


def render_rows(result: QueryRows) -> str:
    """Wire rendering used by the agent's query tool and the CLI."""
    if result.is_count:
        return f"COUNT {result.count}"
    lines = [f"{len(result.rows)} rows"]
    lines.extend(" | ".join(row) for row in result.rows)
    return "\n".join(lines)

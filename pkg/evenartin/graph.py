from __future__ import annotations

import functools
import itertools
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

import networkx as nx

from .errors import (
    ArtinError,
    DuplicateEdge,
    FcViolation,
    OddLabel,
    ParseError,
    SelfLoop,
    UnknownVertex,
)

log = logging.getLogger(__name__)

VERTEX_RE = re.compile(r"^[^\s^,#|]+$")
# joins type and index in kernel generator names
INDEX_SEP = "@"
EMPTY_WORD = "1"


def check_vertex_name(name: str, *, line: int = 0, indexed: bool = True) -> str:
    """Reject names the word and CLI syntaxes cannot tell apart; `indexed=False` also reserves `@`."""
    v = str(name or "")
    if not VERTEX_RE.match(v):
        raise ParseError(f"invalid vertex name {v!r}", line=line)
    if v == EMPTY_WORD:
        raise ParseError(f"vertex name {v!r} is the empty word", line=line)
    if not indexed and INDEX_SEP in v:
        raise ParseError(f"vertex name {v!r} uses {INDEX_SEP!r}, which is kept for kernel generators", line=line)
    return v


def _edge_key(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class RawGraph:
    """Unvalidated graph data as read from the text format."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, int, int], ...]  # (u, v, label, line)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[ArtinError, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict[str, Any]:
        return {"ok": self.ok, "violations": [e.as_dict() for e in self.violations]}


@dataclass(frozen=True)
class AmalgamSplit:
    x: str
    X: frozenset[str]
    Y: frozenset[str]
    Z: frozenset[str]


def _violations(vertices: Iterable[str], edges: Iterable[tuple[str, str, int, int]]) -> list[ArtinError]:
    out: list[ArtinError] = []
    known = set(vertices)
    seen: dict[tuple[str, str], int] = {}
    for u, v, label, _line in edges:
        if u == v:
            out.append(SelfLoop(u))
            continue
        for w in (u, v):
            if w not in known:
                out.append(UnknownVertex(w))
        k = _edge_key(u, v)
        if k in seen:
            out.append(DuplicateEdge(*k))
            continue
        if int(label) < 2 or int(label) % 2:
            out.append(OddLabel(k[0], k[1], int(label)))
        seen[k] = int(label)
    g = nx.Graph()
    g.add_nodes_from(known)
    g.add_edges_from(seen)
    for clique in nx.enumerate_all_cliques(g):
        if len(clique) < 3:
            continue
        if len(clique) > 3:
            break
        u, v, w = sorted(clique)
        labels = (seen[_edge_key(u, v)], seen[_edge_key(v, w)], seen[_edge_key(u, w)])
        if sum(1 for m in labels if m == 2) < 2:
            out.append(FcViolation((u, v, w), labels))
    return out


@dataclass(frozen=True)
class ArtinGraph:
    """An even Artin graph of FC type; immutable once built.

    `parent` records the graph this one was induced from (names are kept, so
    the vertex injection is the identity on names).
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, int], ...]
    parent: ArtinGraph | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        verts = tuple(sorted(set(self.vertices)))
        if len(verts) != len(self.vertices):
            raise ArtinError("duplicate vertex names")
        for v in verts:
            check_vertex_name(v)
        problems = _violations(verts, [(u, v, m, 0) for u, v, m in self.edges])
        if problems:
            raise problems[0]
        adj: dict[str, dict[str, int]] = {v: {} for v in verts}
        for u, v, m in self.edges:
            adj[u][v] = int(m)
            adj[v][u] = int(m)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(
            self, "edges", tuple(sorted((*_edge_key(u, v), int(m)) for u, v, m in self.edges))
        )
        object.__setattr__(self, "_adj", adj)
        object.__setattr__(self, "_vset", frozenset(verts))

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, int]] = ()) -> ArtinGraph:
        es = list(edges)
        vs = set(vertices)
        for u, v, _m in es:
            vs.update((u, v))
        return cls(tuple(sorted(vs)), tuple(es))

    @property
    def vertex_set(self) -> frozenset[str]:
        return self._vset  # type: ignore[attr-defined]

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: object) -> bool:
        return v in self.vertex_set

    def require(self, v: str) -> str:
        if v not in self.vertex_set:
            raise UnknownVertex(v)
        return v

    def require_all(self, vs: Iterable[str]) -> frozenset[str]:
        out = frozenset(vs)
        for v in sorted(out):
            self.require(v)
        return out

    def label(self, u: str, v: str) -> int | None:
        """Edge label m_{u,v}, or None when u and v are not joined."""
        return self._adj[self.require(u)].get(self.require(v))  # type: ignore[attr-defined]

    def link(self, v: str) -> frozenset[str]:
        return frozenset(self._adj[self.require(v)])  # type: ignore[attr-defined]

    def star(self, v: str) -> frozenset[str]:
        return self.link(v) | {v}

    def commutes(self, u: str, v: str) -> bool:
        return u == v or self.label(u, v) == 2

    def is_complete(self) -> bool:
        n = len(self.vertices)
        return len(self.edges) == n * (n - 1) // 2

    def big_edges(self) -> list[tuple[str, str, int]]:
        return [(u, v, m) for u, v, m in self.edges if m > 2]

    def as_text(self) -> str:
        lines = [f"vertex {v}" for v in self.vertices]
        lines += [f"edge {u} {v} {m}" for u, v, m in self.edges]
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict[str, Any]:
        return {"vertices": list(self.vertices), "edges": [[u, v, m] for u, v, m in self.edges]}



def parse_graph_text(text: str) -> RawGraph:
    declared_at: dict[str, int] = {}
    edges: list[tuple[str, str, int, int]] = []
    for no, raw in enumerate(str(text or "").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw = parts[0].lower()
        if kw == "vertex":
            if len(parts) != 2:
                raise ParseError("expected `vertex <name>`", line=no)
            v = check_vertex_name(parts[1], line=no, indexed=False)
            if v in declared_at:
                raise ParseError(f"vertex {v} declared twice (first on line {declared_at[v]})", line=no)
            declared_at[v] = no
        elif kw == "edge":
            if len(parts) != 4:
                raise ParseError("expected `edge <name> <name> <label>`", line=no)
            try:
                label = int(parts[3])
            except ValueError:
                raise ParseError(f"label {parts[3]!r} is not an integer", line=no) from None
            u, v = (check_vertex_name(p, line=no, indexed=False) for p in parts[1:3])
            edges.append((u, v, label, no))
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", line=no)
    declared = list(declared_at)
    for u, v, _m, _no in edges:
        for w in (u, v):
            if w not in declared:
                declared.append(w)
    return RawGraph(tuple(declared), tuple(edges))


def validate(raw: RawGraph) -> ArtinGraph | ValidationReport:
    problems = _violations(raw.vertices, raw.edges)
    if problems:
        log.debug("graph rejected with %d violation(s)", len(problems))
        return ValidationReport(tuple(problems))
    return ArtinGraph(tuple(sorted(raw.vertices)), tuple((u, v, m) for u, v, m, _ in raw.edges))


def load_graph(path: str | Path) -> ArtinGraph:
    res = validate(parse_graph_text(Path(path).read_text(encoding="utf-8")))
    if isinstance(res, ValidationReport):
        raise res.violations[0]
    return res


@functools.lru_cache(maxsize=4096)
def _induced(graph: ArtinGraph, keep: frozenset[str]) -> ArtinGraph:
    sub = ArtinGraph(
        tuple(sorted(keep)),
        tuple((u, v, m) for u, v, m in graph.edges if u in keep and v in keep),
        parent=graph,
    )
    assert isinstance(validate(RawGraph(sub.vertices, tuple((u, v, m, 0) for u, v, m in sub.edges))), ArtinGraph)
    return sub


def induced_subgraph(graph: ArtinGraph, S: Iterable[str]) -> ArtinGraph:
    keep = graph.require_all(S)
    if keep == graph.vertex_set:
        return graph
    return _induced(graph, keep)


def direct_product_split(graph: ArtinGraph) -> list[frozenset[str]]:
    """Finest partition of V whose cross pairs are all joined by label-2 edges."""
    blocking = nx.Graph()
    blocking.add_nodes_from(graph.vertices)
    for u, v in itertools.combinations(graph.vertices, 2):
        if graph.label(u, v) != 2:
            blocking.add_edge(u, v)
    parts = [frozenset(c) for c in nx.connected_components(blocking)]
    return sorted(parts, key=lambda c: min(c))


def amalgam_split(graph: ArtinGraph) -> AmalgamSplit | None:
    V = graph.vertex_set
    for x in graph.vertices:
        st = graph.star(x)
        if st != V:
            return AmalgamSplit(x=x, X=st, Y=V - {x}, Z=graph.link(x))
    return None


def amalgam_split_at(graph: ArtinGraph, x: str) -> AmalgamSplit | None:
    st = graph.star(x)
    if st == graph.vertex_set:
        return None
    return AmalgamSplit(x=x, X=st, Y=graph.vertex_set - {x}, Z=graph.link(x))

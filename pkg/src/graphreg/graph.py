"""Directed multigraphs, paths and walk counting.

Conventions (fixed for the whole package): an edge record ``(id, src, dst)``
has source ``s(e) = src`` and range ``r(e) = dst``.  Paths are written right
to left, so ``Path.edges == (mu_1, ..., mu_n)`` satisfies
``s(mu_i) == r(mu_{i+1})``; the path starts at ``s(mu_n)`` and ends at
``r(mu_1)``.
"""

from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Iterator, Mapping

import jsonschema

from .errors import CycleError, GraphFormatError, UnknownVertexError

OMEGA = "omega"


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    src: str
    dst: str
    mult: int | str = 1

    @property
    def is_omega(self) -> bool:
        return self.mult == OMEGA


@dataclass(frozen=True)
class Graph:
    """Finite directed multigraph; edges may carry a multiplicity.

    A graph whose edges all have ``mult == 1`` is a plain graph.  Other
    multiplicities (positive integers or :data:`OMEGA`) make it a
    presentation of a multigraph; :meth:`expand` materializes finite ones.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge | tuple] = ()):
        vs = list(vertices)
        es = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
        seen = set()
        for i, v in enumerate(vs):
            if not isinstance(v, str):
                raise GraphFormatError(f"vertex id must be a string, got {v!r}", f"vertices[{i}]")
            if v in seen:
                raise GraphFormatError(f"duplicate vertex id {v!r}", f"vertices[{i}]")
            seen.add(v)
        eids = set()
        for i, e in enumerate(es):
            if e.id in eids:
                raise GraphFormatError(f"duplicate edge id {e.id!r}", f"edges[{i}].id")
            eids.add(e.id)
            for end in ("src", "dst"):
                if getattr(e, end) not in seen:
                    raise GraphFormatError(
                        f"dangling endpoint {getattr(e, end)!r}", f"edges[{i}].{end}"
                    )
            if e.mult != OMEGA and not (isinstance(e.mult, int) and not isinstance(e.mult, bool) and e.mult >= 1):
                raise GraphFormatError(f"invalid multiplicity {e.mult!r}", f"edges[{i}].mult")
        object.__setattr__(self, "vertices", tuple(sorted(vs)))
        object.__setattr__(self, "edges", tuple(sorted(es, key=lambda e: e.id)))
        ins = {v: [] for v in self.vertices}
        outs = {v: [] for v in self.vertices}
        by_id = {}
        for e in self.edges:
            ins[e.dst].append(e)
            outs[e.src].append(e)
            by_id[e.id] = e
        object.__setattr__(
            self,
            "_index",
            {
                "in": {v: tuple(x) for v, x in ins.items()},
                "out": {v: tuple(x) for v, x in outs.items()},
                "edge": by_id,
                "vset": frozenset(self.vertices),
            },
        )

    # -- lookups -----------------------------------------------------------

    def __contains__(self, v) -> bool:
        return v in self._index["vset"]

    def check_vertex(self, v: str) -> str:
        if v not in self._index["vset"]:
            raise UnknownVertexError(v)
        return v

    def edge(self, eid: str) -> Edge:
        try:
            return self._index["edge"][eid]
        except KeyError:
            raise GraphFormatError(f"unknown edge id {eid!r}") from None

    def has_edge(self, eid: str) -> bool:
        return eid in self._index["edge"]

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        """Edges with range ``v`` (the set r^{-1}(v)), sorted by id."""
        return self._index["in"][self.check_vertex(v)]

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        return self._index["out"][self.check_vertex(v)]

    def src(self, eid: str) -> str:
        return self.edge(eid).src

    def dst(self, eid: str) -> str:
        return self.edge(eid).dst

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    @property
    def sources(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self._index["in"][v])

    @property
    def sinks(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self._index["out"][v])

    @property
    def is_plain(self) -> bool:
        return all(e.mult == 1 for e in self.edges)

    @property
    def has_omega(self) -> bool:
        return any(e.is_omega for e in self.edges)

    @property
    def is_row_finite(self) -> bool:
        return not self.has_omega

    def is_regular(self, v: str) -> bool:
        """True when 0 < |r^{-1}(v)| < infinity."""
        ins = self.in_edges(v)
        return bool(ins) and not any(e.is_omega for e in ins)

    # -- derived graphs ----------------------------------------------------

    def expand(self) -> Graph:
        """Replace finite multiplicities by parallel edges ``e#1, e#2, ...``."""
        if self.is_plain:
            return self
        out = []
        for e in self.edges:
            if e.is_omega:
                raise GraphFormatError(f"edge {e.id!r} has infinite multiplicity")
            if e.mult == 1:
                out.append(Edge(e.id, e.src, e.dst))
            else:
                out.extend(Edge(f"{e.id}#{k}", e.src, e.dst) for k in range(1, e.mult + 1))
        return Graph(self.vertices, out)

    def subgraph(self, vertices: Iterable[str], edge_ids: Iterable[str] | None = None) -> Graph:
        """Subgraph on ``vertices``; edges default to all edges inside them."""
        vs = set(vertices)
        for v in vs:
            self.check_vertex(v)
        if edge_ids is None:
            es = [e for e in self.edges if e.src in vs and e.dst in vs]
        else:
            es = [self.edge(i) for i in edge_ids]
        return Graph(vs, es)

    def relabel(self, vertex_map: Mapping[str, str] | None = None, edge_map: Mapping[str, str] | None = None) -> Graph:
        vm = vertex_map or {}
        em = edge_map or {}
        return Graph(
            [vm.get(v, v) for v in self.vertices],
            [Edge(em.get(e.id, e.id), vm.get(e.src, e.src), vm.get(e.dst, e.dst), e.mult) for e in self.edges],
        )

    def path(self, edge_ids: Iterable[str], base: str | None = None) -> Path:
        """Build a path from edges listed right to left (``mu_1`` first)."""
        ids = tuple(edge_ids)
        if not ids:
            if base is None:
                raise GraphFormatError("a trivial path needs a base vertex")
            return Path.trivial(self.check_vertex(base))
        verts = [self.dst(ids[0])]
        for i, eid in enumerate(ids):
            e = self.edge(eid)
            if e.dst != verts[-1]:
                raise GraphFormatError(f"edges {ids[i - 1]!r} and {eid!r} are not composable")
            verts.append(e.src)
        if base is not None and base != verts[-1]:
            raise GraphFormatError(f"path source {verts[-1]!r} differs from base {base!r}")
        return Path(ids, tuple(verts))

    def is_path(self, p: Path) -> bool:
        try:
            return self.path(p.edges, p.source) == p
        except (GraphFormatError, UnknownVertexError):
            return False

    def to_json(self) -> dict:
        edges = []
        for e in self.edges:
            rec = {"id": e.id, "src": e.src, "dst": e.dst}
            if e.mult != 1:
                rec["mult"] = e.mult
            edges.append(rec)
        return {"vertices": list(self.vertices), "edges": edges}

    def __repr__(self):
        es = ", ".join(
            f"{e.id}:{e.src}->{e.dst}" + ("" if e.mult == 1 else f"x{e.mult}") for e in self.edges
        )
        return f"Graph([{', '.join(self.vertices)}], [{es}])"


@dataclass(frozen=True, order=True)
class Path:
    """A finite path.

    ``edges`` is right to left and ``vertices[i]`` is ``r(mu_{i+1})`` so
    that ``vertices[0]`` is the range and ``vertices[-1]`` the source.
    """

    edges: tuple[str, ...]
    vertices: tuple[str, ...]

    @classmethod
    def trivial(cls, v: str) -> Path:
        return cls((), (v,))

    @property
    def source(self) -> str:
        return self.vertices[-1]

    @property
    def range(self) -> str:
        return self.vertices[0]

    @property
    def is_trivial(self) -> bool:
        return not self.edges

    @property
    def base(self) -> str:
        return self.vertices[-1]

    def __len__(self):
        return len(self.edges)

    @property
    def is_simple(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def concat(self, other: Path) -> Path:
        """The path ``self other`` (traverse ``other`` first)."""
        if self.source != other.range:
            raise GraphFormatError(
                f"cannot compose: s(mu)={self.source!r} but r(nu)={other.range!r}"
            )
        return Path(self.edges + other.edges, self.vertices + other.vertices[1:])

    def __str__(self):
        if not self.edges:
            return self.vertices[0]
        return ".".join(self.edges)

    def to_json(self) -> dict:
        return {"edges": list(self.edges), "source": self.source, "range": self.range}


# -- parsing -----------------------------------------------------------------


def _schema(name: str) -> dict:
    return json.loads(resources.files("graphreg.schemas").joinpath(name).read_text())


def _json_location(err: jsonschema.ValidationError) -> str:
    loc = ""
    for part in err.absolute_path:
        loc += f"[{part}]" if isinstance(part, int) else (f".{part}" if loc else part)
    return loc


def parse_graph(document: str | Mapping) -> Graph:
    """Parse the JSON graph schema (``mult`` may be a positive int or "omega")."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"malformed JSON: {exc.msg}", f"line {exc.lineno} col {exc.colno}") from None
    if isinstance(document, Mapping) and "tails" in document:
        raise GraphFormatError("document has tails; load it as a tail-extended graph", "tails")
    validator = jsonschema.Draft202012Validator(_schema("graph.schema.json"))
    errors = sorted(validator.iter_errors(document), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise GraphFormatError(err.message, _json_location(err))
    edges = [
        Edge(rec["id"], rec["src"], rec["dst"], rec.get("mult", 1)) for rec in document["edges"]
    ]
    return Graph(document["vertices"], edges)


def load_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def _q(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def to_dot(g: Graph, name: str = "E") -> str:
    lines = [f"digraph {_q(name)} {{"]
    for v in g.vertices:
        lines.append(f"  {_q(v)};")
    for e in g.edges:
        attrs = [f"label={_q(e.id)}"]
        if e.is_omega:
            attrs = [f"label={_q(e.id + ' (ω)')}", "style=bold"]
        elif e.mult != 1:
            attrs = [f"label={_q(f'{e.id} (x{e.mult})')}"]
        lines.append(f"  {_q(e.src)} -> {_q(e.dst)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- diagnostics ---------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostics:
    row_finite: bool
    sources: tuple[str, ...]
    sinks: tuple[str, ...]
    has_cycle: bool
    n_vertices: int
    n_edges: int

    def to_json(self) -> dict:
        return {
            "rowFinite": self.row_finite,
            "sources": list(self.sources),
            "sinks": list(self.sinks),
            "hasCycle": self.has_cycle,
            "vertexCount": self.n_vertices,
            "edgeCount": self.n_edges,
        }


def has_cycle(g: Graph) -> bool:
    # iterative three-colour DFS
    colour = dict.fromkeys(g.vertices, 0)
    for root in g.vertices:
        if colour[root]:
            continue
        stack = [(root, iter(g.out_edges(root)))]
        colour[root] = 1
        while stack:
            v, it = stack[-1]
            for e in it:
                c = colour[e.dst]
                if c == 1:
                    return True
                if c == 0:
                    colour[e.dst] = 1
                    stack.append((e.dst, iter(g.out_edges(e.dst))))
                    break
            else:
                colour[v] = 2
                stack.pop()
    return False


def validate(g: Graph) -> Diagnostics:
    return Diagnostics(
        row_finite=g.is_row_finite,
        sources=g.sources,
        sinks=g.sinks,
        has_cycle=has_cycle(g),
        n_vertices=len(g.vertices),
        n_edges=len(g.edges),
    )


def topological_order(g: Graph) -> list[str]:
    """Vertices ordered so every edge goes from an earlier to a later vertex."""
    indeg = {v: len(g.in_edges(v)) for v in g.vertices}
    ready = deque(v for v in g.vertices if indeg[v] == 0)
    order = []
    while ready:
        v = ready.popleft()
        order.append(v)
        for e in g.out_edges(v):
            indeg[e.dst] -= 1
            if indeg[e.dst] == 0:
                ready.append(e.dst)
    if len(order) != len(g.vertices):
        raise CycleError("graph has a cycle")
    return order


def reachable_from(g: Graph, starts: Iterable[str]) -> set[str]:
    """Vertices reachable by (possibly trivial) paths from ``starts``."""
    seen = {g.check_vertex(v) for v in starts}
    todo = list(seen)
    while todo:
        v = todo.pop()
        for e in g.out_edges(v):
            if e.dst not in seen:
                seen.add(e.dst)
                todo.append(e.dst)
    return seen


def reaching(g: Graph, targets: Iterable[str]) -> set[str]:
    """Vertices with a (possibly trivial) path into ``targets``."""
    seen = {g.check_vertex(v) for v in targets}
    todo = list(seen)
    while todo:
        v = todo.pop()
        for e in g.in_edges(v):
            if e.src not in seen:
                seen.add(e.src)
                todo.append(e.src)
    return seen


def as_plain(g: Graph) -> Graph:
    """Expand finite multiplicities; path machinery only runs on plain graphs."""
    return g if g.is_plain else g.expand()


# -- paths ---------------------------------------------------------------------


def iter_simple_paths_from(g: Graph, start: str) -> Iterator[Path]:
    """All simple paths with source ``start`` (trivial path included)."""
    g.check_vertex(start)
    stack = [Path.trivial(start)]
    while stack:
        p = stack.pop()
        yield p
        on = set(p.vertices)
        for e in reversed(g.out_edges(p.range)):
            if e.dst not in on:
                stack.append(Path((e.id,) + p.edges, (e.dst,) + p.vertices))


def enumerate_boundary_simple_paths(g: Graph) -> list[Path]:
    """Simple paths whose source is a source of ``g`` (the simple part of E^{<=inf}).

    Sorted by edge-id tuple, then by source vertex.
    """
    g = as_plain(g)
    out = [p for w in g.sources for p in iter_simple_paths_from(g, w)]
    out.sort(key=lambda p: (p.edges, p.source))
    return out


def acyclic_summands(g: Graph) -> dict[str, int]:
    """For each source ``w``, the number of paths with source ``w``.

    These are the matrix sizes of the summands of the algebra of a finite
    acyclic graph.
    """
    g = as_plain(g)
    order = topological_order(g)
    count = {}
    for v in reversed(order):
        count[v] = 1 + sum(count[e.dst] for e in g.out_edges(v))
    return {w: count[w] for w in g.sources}


# -- walk trichotomy -----------------------------------------------------------


class WalkClass(enum.IntEnum):
    ZERO = 0
    ONE = 1
    MANY = 2

    def __str__(self):
        return self.name.lower()


_INIT = ("init",)
_ACCEPT = ("accept",)


def walk_class(
    g: Graph,
    start: str,
    end: str,
    forbidden_interior: Iterable[str] = (),
    must_leave: Iterable[str] | None = None,
    allow_trivial: bool = False,
) -> WalkClass:
    """Classify the number of walks ``start -> end`` as zero, one or many.

    Walks have length >= 1 (or >= 0 with ``allow_trivial``), never visit a
    vertex of ``forbidden_interior`` strictly inside, and, when
    ``must_leave`` is given, use at least one edge outside that set.

    The walks are the accepting runs of a small automaton over states
    ``(vertex, used_outside_edge)``; restricted to useful states the count
    is zero if nothing accepts, many if a cycle or a branching survives, and
    one otherwise.
    """
    g = as_plain(g)
    g.check_vertex(start)
    g.check_vertex(end)
    forbidden = frozenset(forbidden_interior)
    for v in forbidden:
        g.check_vertex(v)
    inside = None if must_leave is None else frozenset(must_leave)
    need_flag = inside is not None

    def step(flag, e):
        nf = flag or (need_flag and e.id not in inside)
        targets = []
        if e.dst == end and (nf or not need_flag):
            targets.append(_ACCEPT)
        if e.dst not in forbidden:
            targets.append((e.dst, nf))
        return targets

    succ: dict = {}
    todo = [_INIT]
    succ[_INIT] = []
    if allow_trivial and start == end and not need_flag:
        succ[_INIT].append(_ACCEPT)
    for e in g.out_edges(start):
        succ[_INIT].extend(step(False, e))
    seen = {_INIT}
    while todo:
        s = todo.pop()
        if s is not _INIT:
            if s == _ACCEPT:
                succ[s] = []
                continue
            v, flag = s
            succ[s] = [t for e in g.out_edges(v) for t in step(flag, e)]
        for t in succ[s]:
            if t not in seen:
                seen.add(t)
                todo.append(t)
    if _ACCEPT not in seen:
        return WalkClass.ZERO
    pred: dict = {}
    for s, ts in succ.items():
        for t in ts:
            pred.setdefault(t, []).append(s)
    useful = {_ACCEPT}
    todo = [_ACCEPT]
    while todo:
        t = todo.pop()
        for s in pred.get(t, ()):
            if s not in useful:
                useful.add(s)
                todo.append(s)
    # useful states are all forward-reachable by construction
    indeg = dict.fromkeys(useful, 0)
    for s in useful:
        live = [t for t in succ[s] if t in useful]
        if len(live) >= 2:
            return WalkClass.MANY
        for t in live:
            indeg[t] += 1
    ready = [s for s, d in indeg.items() if d == 0]
    done = 0
    while ready:
        s = ready.pop()
        done += 1
        for t in succ[s]:
            if t in useful:
                indeg[t] -= 1
                if indeg[t] == 0:
                    ready.append(t)
    if done != len(useful):
        return WalkClass.MANY
    return WalkClass.ONE


def return_path_class(g: Graph, v: str) -> WalkClass:
    """How many return paths ``v`` has (walks meeting ``v`` only at the ends)."""
    return walk_class(g, v, v, forbidden_interior=(v,))

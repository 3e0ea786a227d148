"""Desingularization of infinite receivers and tail-extended graphs.

A vertex ``v0`` receiving infinitely many edges is replaced by an infinite
backwards tail ``v0 <- t1 <- t2 <- ...``; each original edge into ``v0`` is
rerouted to a distinct tail vertex, so every vertex receives at most two
edges.  With finitely many edge classes the resulting entry assignment
(position ``i`` -> source vertex) is eventually periodic and is stored as a
preperiod followed by a repeating period.  Collapsing the tail restores the
original multiplicities.

Infinite questions are answered on a finite truncation of the tails; the
window is long enough that every periodic entry appears at least twice.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

import jsonschema

from .errors import GraphFormatError, PreconditionError
from .graph import (
    OMEGA,
    Edge,
    Graph,
    Path,
    WalkClass,
    _json_location,
    _q,
    _schema,
    has_cycle,
    parse_graph,
    reachable_from,
    return_path_class,
)
from .properties import ConditionKVerdict, DetourVerdict, condition_k, distinct_detours


@dataclass(frozen=True)
class Tail:
    base: str
    preperiod: tuple[str, ...]
    period: tuple[str, ...]
    exits: tuple[tuple[int, str], ...] = ()

    def entry(self, i: int) -> str | None:
        """Source of the entry edge at tail position ``i >= 1``."""
        if i < 1:
            return None
        if i <= len(self.preperiod):
            return self.preperiod[i - 1]
        if not self.period:
            return None
        return self.period[(i - len(self.preperiod) - 1) % len(self.period)]

    @property
    def window(self) -> int:
        """Truncation length: the preperiod plus three periods."""
        return len(self.preperiod) + 3 * len(self.period)

    def to_json(self) -> dict:
        out = {"base": self.base, "preperiod": list(self.preperiod), "period": list(self.period)}
        if self.exits:
            out["exits"] = [{"position": i, "dst": d} for i, d in self.exits]
        return out


def tail_vertex(base: str, i: int) -> str:
    return base if i == 0 else f"{base}~t{i}"


@dataclass(frozen=True)
class TailPath:
    """The infinite backwards path ``t_k <- t_{k+1} <- ...`` along one tail."""

    base: str
    start: int

    def to_json(self) -> dict:
        return {"kind": "tail", "base": self.base, "from": tail_vertex(self.base, self.start)}

    def __str__(self):
        return f"{tail_vertex(self.base, self.start)} <- {tail_vertex(self.base, self.start + 1)} <- ..."


@dataclass(frozen=True)
class TailExtendedGraph:
    core: Graph
    tails: tuple[Tail, ...] = ()
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def tail_at(self, base: str) -> Tail:
        for t in self.tails:
            if t.base == base:
                return t
        raise KeyError(base)

    def problems(self) -> list[str]:
        """Violations of the collapsibility invariants (empty when valid)."""
        out = []
        if not self.core.is_plain:
            out.append("core must be a plain graph")
        bases = [t.base for t in self.tails]
        if len(set(bases)) != len(bases):
            out.append("two tails share a base vertex")
        for t in self.tails:
            if t.base not in self.core:
                out.append(f"tail base {t.base!r} is not a core vertex")
                continue
            if self.core.in_edges(t.base):
                out.append(f"tail at {t.base!r} is not collapsible: the base receives core edges")
            for pos, dst in t.exits:
                out.append(f"tail at {t.base!r} is not collapsible: exit at interior position {pos} (to {dst!r})")
            for w in t.preperiod + t.period:
                if w not in self.core:
                    out.append(f"tail at {t.base!r} has unknown entry source {w!r}")
        return out

    def check(self):
        bad = self.problems()
        if bad:
            raise PreconditionError(bad[0])

    def realize(self, extra: int = 0) -> Graph:
        """Finite truncation: core plus each tail cut after ``window + extra`` vertices."""
        key = ("realize", extra)
        if key in self._cache:
            return self._cache[key]
        self.check()
        verts = list(self.core.vertices)
        edges = list(self.core.edges)
        for t in self.tails:
            n = t.window + extra
            for i in range(1, n + 1):
                ti = tail_vertex(t.base, i)
                if ti in self.core:
                    raise GraphFormatError(f"tail vertex name {ti!r} clashes with a core vertex")
                verts.append(ti)
                edges.append(Edge(f"{t.base}~e{i}", ti, tail_vertex(t.base, i - 1)))
                w = t.entry(i)
                if w is not None:
                    edges.append(Edge(f"{t.base}~in{i}", w, ti))
        g = Graph(verts, edges)
        self._cache[key] = g
        return g

    @property
    def has_cycle(self) -> bool:
        return has_cycle(self.realize())

    @property
    def sources(self) -> tuple[str, ...]:
        bases = {t.base for t in self.tails}
        return tuple(v for v in self.core.sources if v not in bases)

    def to_json(self) -> dict:
        out = self.core.to_json()
        out["tails"] = [t.to_json() for t in self.tails]
        return out


def parse_tail_extended(document: str | Mapping) -> TailExtendedGraph:
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"malformed JSON: {exc.msg}", f"line {exc.lineno} col {exc.colno}") from None
    validator = jsonschema.Draft202012Validator(_schema("graph.schema.json"))
    errors = sorted(validator.iter_errors(document), key=lambda e: list(e.absolute_path))
    if errors:
        raise GraphFormatError(errors[0].message, _json_location(errors[0]))
    core = parse_graph({k: v for k, v in document.items() if k != "tails"})
    if not core.is_plain:
        raise GraphFormatError("the core of a tail-extended graph must have multiplicity 1", "edges")
    tails = tuple(
        Tail(
            rec["base"],
            tuple(rec["preperiod"]),
            tuple(rec["period"]),
            tuple((x["position"], x["dst"]) for x in rec.get("exits", [])),
        )
        for rec in document.get("tails", [])
    )
    for i, t in enumerate(tails):
        for w in (t.base, *t.preperiod, *t.period):
            if w not in core:
                raise GraphFormatError(f"dangling endpoint {w!r}", f"tails[{i}]")
    return TailExtendedGraph(core, tails)


def load_document(document: str | Mapping) -> Graph | TailExtendedGraph:
    """Parse a graph document; documents with a ``tails`` key become tail-extended graphs."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"malformed JSON: {exc.msg}", f"line {exc.lineno} col {exc.colno}") from None
    if isinstance(document, Mapping) and "tails" in document:
        return parse_tail_extended(document)
    return parse_graph(document)


def load_file(path) -> Graph | TailExtendedGraph:
    with open(path, encoding="utf-8") as fh:
        return load_document(fh.read())


# -- desingularize / collapse ---------------------------------------------------


def desingularize(mg: Graph) -> TailExtendedGraph:
    """Attach a tail at every vertex with an omega in-edge.

    Entries are laid out with the finite-multiplicity edges first (edge-id
    order, one position per copy) followed by the omega edges in round-robin
    order, which is the period.
    """
    receivers = sorted({e.dst for e in mg.edges if e.is_omega})
    core_edges = []
    for e in mg.edges:
        if e.dst in receivers:
            continue
        if e.mult == 1:
            core_edges.append(Edge(e.id, e.src, e.dst))
        else:
            core_edges.extend(Edge(f"{e.id}#{k}", e.src, e.dst) for k in range(1, e.mult + 1))
    tails = []
    for v in receivers:
        ins = mg.in_edges(v)
        pre = tuple(x for e in ins if not e.is_omega for x in [e.src] * e.mult)
        per = tuple(e.src for e in ins if e.is_omega)
        tails.append(Tail(v, pre, per))
    return TailExtendedGraph(Graph(mg.vertices, core_edges), tuple(tails))


def collapse(teg: TailExtendedGraph) -> Graph:
    """Contract every tail back to its base, restoring multiplicities."""
    teg.check()
    used = set(teg.core.edge_ids)
    edges = list(teg.core.edges)
    for t in teg.tails:
        counts = {}
        for w in t.preperiod:
            counts[w] = counts.get(w, 0) + 1
        for w in t.period:
            counts[w] = OMEGA
        for w, m in sorted(counts.items()):
            eid = f"{w}~{t.base}"
            while eid in used:
                eid += "'"
            used.add(eid)
            edges.append(Edge(eid, w, t.base, m))
    return Graph(teg.core.vertices, edges)


def multiplicity_profile(g: Graph) -> dict[tuple[str, str], int | str]:
    """Total multiplicity per ordered vertex pair; omega absorbs everything."""
    out = {}
    for e in g.edges:
        key = (e.src, e.dst)
        if e.is_omega or out.get(key) == OMEGA:
            out[key] = OMEGA
        else:
            out[key] = out.get(key, 0) + e.mult
    return out


def same_multigraph(a: Graph, b: Graph) -> bool:
    """Equality of expansions up to renaming edges (vertex ids are kept)."""
    return set(a.vertices) == set(b.vertices) and multiplicity_profile(a) == multiplicity_profile(b)


# -- decisions on tail-extended graphs ------------------------------------------


def condition_k_extended(teg: TailExtendedGraph) -> ConditionKVerdict:
    """Condition (K) for the infinite graph.

    Core vertices are judged on the truncation (a return path through a
    late tail position has a shifted twin one period earlier).  A tail vertex
    beyond the preperiod plus one period always has a second return path
    through the earlier copy of its own entry, so only earlier ones are
    examined.
    """
    if not teg.tails:
        return condition_k(teg.core)
    g = teg.realize()
    for v in teg.core.vertices:
        if return_path_class(g, v) is WalkClass.ONE:
            return ConditionKVerdict(False, v)
    for t in teg.tails:
        for i in range(1, len(t.preperiod) + len(t.period) + 1):
            ti = tail_vertex(t.base, i)
            if return_path_class(g, ti) is WalkClass.ONE:
                return ConditionKVerdict(False, ti)
    return ConditionKVerdict(True)


def distinct_detours_extended(teg: TailExtendedGraph) -> DetourVerdict:
    """Distinct detours for a tail-extended graph.

    Every infinite tail path needs a distinct detour, which happens exactly
    when some periodic entry source is reachable from the base.  Tail
    vertices are never sources, so the finite boundary paths start at core
    sources; the trivial path at such a source has no detour at all.
    """
    if not teg.tails:
        return distinct_detours(teg.core)
    g = teg.realize()
    for t in teg.tails:
        reach = reachable_from(g, [t.base])
        if not any(w in reach for w in t.period):
            hits = [i for i, w in enumerate(t.preperiod, start=1) if w in reach]
            start = max(hits) if hits else 0
            return DetourVerdict(False, TailPath(t.base, start))
    for u in teg.sources:
        return DetourVerdict(False, Path.trivial(u))
    return DetourVerdict(True)


def to_dot_extended(teg: TailExtendedGraph, name: str = "E") -> str:
    """Core plus each tail drawn through its preperiod and one period, then an ellipsis."""
    lines = [f"digraph {_q(name)} {{"]
    for v in teg.core.vertices:
        lines.append(f"  {_q(v)};")
    for e in teg.core.edges:
        lines.append(f"  {_q(e.src)} -> {_q(e.dst)} [label={_q(e.id)}];")
    for t in teg.tails:
        shown = len(t.preperiod) + max(len(t.period), 1)
        for i in range(1, shown + 1):
            ti = tail_vertex(t.base, i)
            lines.append(f"  {_q(ti)} [shape=point];")
            lines.append(f"  {_q(ti)} -> {_q(tail_vertex(t.base, i - 1))};")
            w = t.entry(i)
            if w is not None:
                lines.append(f"  {_q(w)} -> {_q(ti)} [style=dashed];")
        dots = f"{t.base}~..."
        lines.append(f"  {_q(dots)} [label=\"…\", shape=plaintext];")
        lines.append(f"  {_q(dots)} -> {_q(tail_vertex(t.base, shown))};")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "Tail",
    "TailExtendedGraph",
    "TailPath",
    "collapse",
    "condition_k_extended",
    "desingularize",
    "distinct_detours_extended",
    "load_document",
    "load_file",
    "multiplicity_profile",
    "parse_tail_extended",
    "same_multigraph",
    "tail_vertex",
    "to_dot_extended",
]

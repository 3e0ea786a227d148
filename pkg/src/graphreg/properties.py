"""Condition (K), distinct detours and elementary-subquotient witnesses."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import InternalConsistencyError, PreconditionError
from .graph import (
    Graph,
    Path,
    WalkClass,
    acyclic_summands,
    as_plain,
    enumerate_boundary_simple_paths,
    reaching,
    return_path_class,
)
from .lattice import HSSet, classify_subset, hs_closure, quotient_graph


@dataclass(frozen=True)
class ConditionKVerdict:
    holds: bool
    witness: str | None = None

    def to_json(self) -> dict:
        return {"holds": self.holds, "witness": self.witness}


def condition_k(g: Graph) -> ConditionKVerdict:
    """Every vertex on a cycle must have at least two return paths.

    The witness is the first vertex (by id) with exactly one return path.
    """
    g = as_plain(g)
    for v in g.vertices:
        cls = return_path_class(g, v)
        if cls is WalkClass.ONE:
            return ConditionKVerdict(False, v)
    return ConditionKVerdict(True)


def is_distinct_detour(g: Graph, mu: Path, nu: Path) -> bool:
    """Direct check of the defining predicate (used to re-verify search results)."""
    if not g.is_path(nu) or nu.is_trivial:
        return False
    on = set(mu.vertices)
    return nu.source in on and nu.range in on and any(e not in mu.edges for e in nu.edges)


def distinct_detour_for(g: Graph, mu: Path) -> Path | None:
    """A shortest distinct detour for ``mu``, or ``None``.

    Breadth-first search over ``(vertex, used an edge off mu)`` from the
    vertices of ``mu``; among shortest detours the lexicographically least
    edge tuple (right-to-left order) is returned.
    """
    g = as_plain(g)
    if not g.is_path(mu):
        raise PreconditionError(f"{mu} is not a path of the graph")
    on = set(mu.vertices)
    used = set(mu.edges)
    dist = {}
    queue = deque()
    for v in sorted(on):
        dist[(v, False)] = 0
        queue.append((v, False))
    while queue:
        state = queue.popleft()
        v, flag = state
        for e in g.out_edges(v):
            nxt = (e.dst, flag or e.id not in used)
            if nxt not in dist:
                dist[nxt] = dist[state] + 1
                queue.append(nxt)
    targets = {(v, True) for v in on if (v, True) in dist}
    if not targets:
        return None
    length = min(dist[t] for t in targets)
    frontier = {t for t in targets if dist[t] == length}
    chosen = []
    # build right to left: the first edge of the tuple enters the range vertex
    for level in range(length, 0, -1):
        best = None
        preds = set()
        for (v, flag) in frontier:
            for e in g.in_edges(v):
                for pflag in (False, True):
                    p = (e.src, pflag)
                    if dist.get(p) != level - 1:
                        continue
                    if (pflag or e.id not in used) != flag:
                        continue
                    if best is None or e.id < best:
                        best, preds = e.id, {p}
                    elif e.id == best:
                        preds.add(p)
        chosen.append(best)
        frontier = preds
    return g.path(chosen)


@dataclass(frozen=True)
class DetourVerdict:
    holds: bool
    witness: object = None
    detour_map: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        w = self.witness
        return {
            "holds": self.holds,
            "witness": None if w is None else w.to_json(),
            "detours": [
                {"path": p.to_json(), "detour": d.to_json()} for p, d in self.detour_map.items()
            ],
        }


def distinct_detours(g: Graph) -> DetourVerdict:
    """Decide whether every simple boundary path has a distinct detour.

    For a finite graph this must coincide with having no sources; both are
    computed and a disagreement raises :class:`InternalConsistencyError`.
    """
    g = as_plain(g)
    found = {}
    witness = None
    for mu in enumerate_boundary_simple_paths(g):
        nu = distinct_detour_for(g, mu)
        if nu is None:
            witness = mu
            break
        found[mu] = nu
    holds = witness is None
    if holds != (not g.sources):
        raise InternalConsistencyError(
            f"detour search says {holds} but the graph has sources {g.sources}"
        )
    return DetourVerdict(holds, witness, found)


@dataclass(frozen=True)
class ElementaryWitness:
    path: Path
    S: frozenset
    H: HSSet
    line_graph: Graph
    dimension: int

    def to_json(self) -> dict:
        return {
            "path": self.path.to_json(),
            "S": sorted(self.S),
            "H": list(self.H.sorted()),
            "lineGraph": self.line_graph.to_json(),
            "dimension": self.dimension,
        }


def elementary_witness(g: Graph, mu: Path) -> ElementaryWitness:
    """Certify an elementary subquotient from a simple boundary path with no distinct detour.

    ``S`` collects the vertices off ``mu`` with a path into ``mu``; its
    hereditary-saturated closure ``H`` misses ``mu`` and, in ``E \\ H``, the
    edges of ``mu`` form an entrance-complete line whose algebra is a single
    matrix block of size ``len(mu) + 1``.
    """
    g = as_plain(g)
    if not mu.is_simple or mu.source not in g.sources:
        raise PreconditionError("mu must be a simple path starting at a source")
    if distinct_detour_for(g, mu) is not None:
        raise PreconditionError(f"{mu} has a distinct detour")
    on = set(mu.vertices)
    S = frozenset(reaching(g, on) - on)
    H = hs_closure(g, S)
    if H.subset & on:
        raise InternalConsistencyError("closure of S meets the path")
    rest = quotient_graph(g, H)
    line = rest.subgraph(on, mu.edges)
    for eid in mu.edges:
        for e in rest.in_edges(g.dst(eid)):
            if e.id not in mu.edges:
                raise InternalConsistencyError(f"edge {e.id!r} enters the path in E \\ H")
    summands = acyclic_summands(line)
    if list(summands) != [mu.source] or summands[mu.source] != len(mu) + 1:
        raise InternalConsistencyError(f"unexpected summands {summands}")
    if classify_subset(g, H.subset) != (True, True):
        raise InternalConsistencyError("H is not hereditary and saturated")
    return ElementaryWitness(mu, S, H, line, summands[mu.source])

"""Hereditary and saturated vertex sets, the ideal lattice and composition series.

A set H is hereditary when every edge with range in H has its source in H,
and saturated when every vertex that receives edges, all of whose edge
sources lie in H, is itself in H.  For a row-finite graph these sets are in
bijection with the gauge-invariant ideals of the graph algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import kernels
from .errors import ConditionKError, PreconditionError
from .graph import Graph, as_plain

EXHAUSTIVE_LIMIT = 20


@dataclass(frozen=True)
class HSSet:
    subset: frozenset
    hereditary: bool
    saturated: bool

    @property
    def is_hs(self) -> bool:
        return self.hereditary and self.saturated

    def sorted(self) -> tuple[str, ...]:
        return tuple(sorted(self.subset))

    def __len__(self):
        return len(self.subset)

    def __contains__(self, v):
        return v in self.subset


class _Masks:
    """Bit positions follow ``g.vertices`` (sorted ids)."""

    def __init__(self, g: Graph):
        self.g = g
        self.pos = {v: i for i, v in enumerate(g.vertices)}
        self.n = len(g.vertices)
        pred = [0] * self.n
        for e in g.edges:
            pred[self.pos[e.dst]] |= 1 << self.pos[e.src]
        self.pred = pred

    def to_mask(self, S: Iterable[str]) -> int:
        m = 0
        for v in S:
            self.g.check_vertex(v)
            m |= 1 << self.pos[v]
        return m

    def to_set(self, m: int) -> frozenset:
        return frozenset(v for v, i in self.pos.items() if m >> i & 1)


def _masks(g):
    return _Masks(as_plain(g))


def classify_subset(g: Graph, S: Iterable[str]) -> tuple[bool, bool]:
    """Return ``(hereditary, saturated)`` for ``S``."""
    mk = _masks(g)
    h, s = kernels.classify_mask(mk.pred, mk.n, mk.to_mask(S))
    return bool(h), bool(s)


def make_hsset(g: Graph, S: Iterable[str]) -> HSSet:
    S = frozenset(S)
    h, s = classify_subset(g, S)
    return HSSet(S, h, s)


def hs_closure(g: Graph, S: Iterable[str]) -> HSSet:
    """Smallest hereditary and saturated superset of ``S``."""
    mk = _masks(g)
    m = kernels.closure_mask(mk.pred, mk.n, mk.to_mask(S))
    return HSSet(mk.to_set(m), True, True)


@dataclass(frozen=True)
class IdealLattice:
    """All hereditary-saturated subsets of a graph, ordered by inclusion."""

    graph: Graph
    elements: tuple[HSSet, ...]
    method: str

    @property
    def count(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def between(self, lower: HSSet, upper: HSSet) -> list[HSSet]:
        return [h for h in self.elements if lower.subset <= h.subset <= upper.subset]

    def covers(self, h: HSSet) -> list[HSSet]:
        """Inclusion-minimal elements strictly above ``h``, lexicographic order."""
        above = [k for k in self.elements if h.subset < k.subset]
        minimal = [k for k in above if not any(j.subset < k.subset for j in above)]
        return sorted(minimal, key=HSSet.sorted)

    def to_json(self) -> list[list[str]]:
        return [list(h.sorted()) for h in self.elements]


def _lattice_key(h: HSSet):
    return (len(h.subset), h.sorted())


def enumerate_hs(g: Graph, exhaustive_limit: int = EXHAUSTIVE_LIMIT) -> IdealLattice:
    """Every hereditary-saturated subset of ``g``.

    Up to ``exhaustive_limit`` vertices all subsets are scanned; above it the
    lattice is generated by closing unions of singleton closures.
    """
    mk = _masks(g)
    if mk.n <= exhaustive_limit:
        masks = kernels.hs_scan(mk.pred, mk.n)
        method = "exhaustive"
    else:
        masks = _generate(mk)
        method = "closure"
    elements = sorted((HSSet(mk.to_set(m), True, True) for m in masks), key=_lattice_key)
    return IdealLattice(mk.g, tuple(elements), method)


def _generate(mk: _Masks) -> set[int]:
    close = lambda m: kernels.closure_mask(mk.pred, mk.n, m)  # noqa: E731
    gens = {close(1 << i) for i in range(mk.n)}
    found = {close(0)} | gens
    frontier = set(gens)
    while frontier:
        new = set()
        for a in frontier:
            for b in gens:
                c = close(a | b)
                if c not in found:
                    new.add(c)
        found |= new
        frontier = new
    return found


def subquotient_graph(g: Graph, H: HSSet | Iterable[str], H_lower: HSSet | Iterable[str]) -> Graph:
    """The graph ``E_H \\ H'``: vertices ``H - H'``, edges with range in ``H``
    and source outside ``H'``.

    ``H = all vertices`` gives the quotient graph ``E \\ H'``; ``H' = {}``
    gives the restriction ``E_H``.
    """
    g = as_plain(g)
    upper = frozenset(H.subset if isinstance(H, HSSet) else H)
    lower = frozenset(H_lower.subset if isinstance(H_lower, HSSet) else H_lower)
    for name, S in (("H", upper), ("H'", lower)):
        if classify_subset(g, S) != (True, True):
            raise PreconditionError(f"{name} is not hereditary and saturated")
    if not lower <= upper:
        raise PreconditionError("H' must be contained in H")
    edges = [e for e in g.edges if e.dst in upper and e.src not in lower]
    return Graph(upper - lower, edges)


def restriction_graph(g: Graph, H) -> Graph:
    """``E_H``."""
    return subquotient_graph(g, H, frozenset())


def quotient_graph(g: Graph, H) -> Graph:
    """``E \\ H``."""
    return subquotient_graph(g, frozenset(as_plain(g).vertices), H)


@dataclass(frozen=True)
class CompositionChain:
    graph: Graph
    chain: tuple[HSSet, ...]

    @property
    def length(self) -> int:
        return len(self.chain) - 1

    def factors(self) -> list[Graph]:
        return [
            subquotient_graph(self.graph, hi, lo) for lo, hi in zip(self.chain, self.chain[1:])
        ]

    def to_json(self) -> list[list[str]]:
        return [list(h.sorted()) for h in self.chain]


def composition_series(g: Graph, lattice: IdealLattice | None = None) -> CompositionChain:
    """A maximal chain of hereditary-saturated sets from the empty set to all vertices.

    Each step moves to the lexicographically least inclusion-minimal set
    strictly above the current one.  Requires Condition (K).
    """
    from .properties import condition_k

    g = as_plain(g)
    verdict = condition_k(g)
    if not verdict.holds:
        raise ConditionKError(
            f"Condition (K) fails at vertex {verdict.witness!r}; ideals need not be gauge-invariant",
            verdict.witness,
        )
    lattice = lattice or enumerate_hs(g)
    current = lattice.elements[0]
    chain = [current]
    top = frozenset(g.vertices)
    while current.subset != top:
        current = lattice.covers(current)[0]
        chain.append(current)
    return CompositionChain(g, tuple(chain))


__all__ = [
    "CompositionChain",
    "HSSet",
    "IdealLattice",
    "classify_subset",
    "composition_series",
    "enumerate_hs",
    "hs_closure",
    "make_hsset",
    "quotient_graph",
    "restriction_graph",
    "subquotient_graph",
]

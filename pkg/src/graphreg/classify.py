"""Regularity verdicts: simple factors, elementary subquotients and Z-stability.

The Z-stability verdict is always tagged with the result that justifies it,
so a caller can tell a theorem from the open conjecture:

==========================  ==================================================
tag                         meaning
==========================  ==================================================
``thm-C-necessity``         Condition (K) or distinct detours fails, so the
                            algebra is not pure and therefore not Z-stable
``thm-B``                   finite graph, Condition (K), no sources
``thm-A-acyclic``           acyclic presentation with distinct detours
``thm-A-finite-ideals``     finite graph with Condition (K)
``conjecture-4.2``          (K) and distinct detours hold but no theorem applies
==========================  ==================================================
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .desing import (
    TailExtendedGraph,
    collapse,
    condition_k_extended,
    desingularize,
    distinct_detours_extended,
)
from .errors import InternalConsistencyError, PreconditionError
from .graph import Graph, acyclic_summands, has_cycle, topological_order
from .lattice import IdealLattice, composition_series, enumerate_hs, subquotient_graph
from .properties import condition_k, distinct_detours, elementary_witness

AF = "AF"
PURELY_INFINITE = "purelyInfinite"

Z_YES = "yes"
Z_NO = "no"
Z_CONJ_YES = "conjecturally-yes"
Z_CONJ_NO = "conjecturally-no"

NON_GAUGE = "infinite/non-gauge-invariant"


@dataclass(frozen=True)
class FactorClass:
    kind: str
    justification: dict

    def to_json(self) -> dict:
        return {"class": self.kind, "justification": self.justification}


def _find_cycle(g: Graph) -> list[str]:
    """Edge ids of one cycle (right to left), found by depth-first search."""
    color = {v: 0 for v in g.vertices}
    parent_edge = {}

    def dfs(v):
        color[v] = 1
        for e in g.out_edges(v):
            if color[e.dst] == 1:
                cyc = [e.id]
                x = v
                while x != e.dst:
                    pe = parent_edge[x]
                    cyc.append(pe.id)
                    x = pe.src
                return cyc
            if color[e.dst] == 0:
                parent_edge[e.dst] = e
                found = dfs(e.dst)
                if found:
                    return found
        color[v] = 2
        return None

    for v in g.vertices:
        if color[v] == 0:
            found = dfs(v)
            if found:
                return found
    return []


def classify_simple_factor(g: Graph) -> FactorClass:
    """AF when acyclic, purely infinite when a cycle exists."""
    k = condition_k(g)
    if not k.holds:
        raise PreconditionError(f"Condition (K) fails at {k.witness!r}")
    lattice = enumerate_hs(g)
    if lattice.count != 2:
        raise PreconditionError(f"graph is not simple: {lattice.count} hereditary-saturated sets")
    if has_cycle(g):
        return FactorClass(PURELY_INFINITE, {"cycle": _find_cycle(g)})
    summands = acyclic_summands(g)
    if len(summands) != 1:
        raise PreconditionError(f"simple acyclic graph with several source classes: {summands}")
    (src, dim), = summands.items()
    return FactorClass(AF, {"topologicalOrder": topological_order(g), "source": src, "dimension": dim})


@dataclass(frozen=True)
class ElementaryResult:
    present: bool
    method: str
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"present": self.present, "method": self.method, "witness": self.witness}


def _combinatorial(g: Graph) -> ElementaryResult:
    k = condition_k(g)
    if not k.holds:
        return ElementaryResult(True, "combinatorial", {"kind": "conditionK", "vertex": k.witness})
    d = distinct_detours(g)
    if d.holds:
        return ElementaryResult(False, "combinatorial")
    w = elementary_witness(g, d.witness)
    return ElementaryResult(True, "combinatorial", {"kind": "detour", **w.to_json()})


def _oracle(g: Graph, lattice: IdealLattice | None = None) -> ElementaryResult:
    k = condition_k(g)
    if not k.holds:
        return ElementaryResult(True, "oracle", {"kind": "conditionK", "vertex": k.witness})
    lattice = lattice or enumerate_hs(g)
    for lo in lattice:
        for hi in lattice:
            if not lo.subset < hi.subset:
                continue
            factor = subquotient_graph(g, hi, lo)
            if enumerate_hs(factor).count == 2 and not has_cycle(factor):
                return ElementaryResult(
                    True,
                    "oracle",
                    {"kind": "subquotient", "H": list(hi.sorted()), "Hlower": list(lo.sorted())},
                )
    return ElementaryResult(False, "oracle")


def elementary_subquotients(g: Graph, method: str = "combinatorial", lattice: IdealLattice | None = None) -> ElementaryResult:
    """Decide whether the algebra of a finite graph has an elementary subquotient.

    ``combinatorial`` negates (K) and distinct detours; ``oracle`` searches
    the ideal lattice for a simple acyclic subquotient.
    """
    if isinstance(g, TailExtendedGraph):
        raise PreconditionError("elementary subquotients are decided for finite graphs only")
    g = g.expand() if not g.is_plain else g
    if method == "combinatorial":
        return _combinatorial(g)
    if method == "oracle":
        return _oracle(g, lattice)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class RegularityReport:
    presentation: str
    condition_k: dict
    distinct_detours: dict
    no_sources: bool
    row_finite: bool
    acyclic: bool
    ideal_count: int | str | None
    ideal_lattice: list | None
    elementary: dict
    pure: bool
    z_stable: str
    provenance: str
    composition_series: list | None = None
    notes: list = field(default_factory=list)

    def coherent(self) -> list[str]:
        """Broken report invariants (empty when the report is consistent)."""
        bad = []
        if self.pure != (self.condition_k["holds"] and self.distinct_detours["holds"]):
            bad.append("pure must equal conditionK and distinctDetours")
        if self.elementary["present"] == self.pure:
            bad.append("elementarySubquotient must be the negation of pure")
        if self.z_stable == Z_YES and not self.pure:
            bad.append("zStable=yes needs pure")
        if self.z_stable == Z_NO and self.provenance != "thm-C-necessity":
            bad.append("zStable=no must be justified by necessity")
        return bad

    def to_json(self) -> dict:
        return {
            "presentation": self.presentation,
            "conditionK": self.condition_k,
            "distinctDetours": self.distinct_detours,
            "noSources": self.no_sources,
            "rowFinite": self.row_finite,
            "acyclic": self.acyclic,
            "idealCount": self.ideal_count,
            "idealLattice": self.ideal_lattice,
            "elementarySubquotient": self.elementary,
            "pure": self.pure,
            "zStable": {"verdict": self.z_stable, "provenance": self.provenance},
            "compositionSeries": self.composition_series,
            "notes": list(self.notes),
        }


def _witness_json(w):
    if w is None:
        return None
    if isinstance(w, str):
        return w
    return w.to_json()


def _z_table(finite: bool, k: bool, dd: bool, no_sources: bool, acyclic: bool) -> tuple[str, str]:
    if not (k and dd):
        return Z_NO, "thm-C-necessity"
    if finite and no_sources:
        return Z_YES, "thm-B"
    if acyclic:
        return Z_YES, "thm-A-acyclic"
    if finite:
        return Z_YES, "thm-A-finite-ideals"
    return Z_CONJ_YES, "conjecture-4.2"


def _series_json(g: Graph, lattice: IdealLattice) -> list:
    chain = composition_series(g, lattice)
    out = []
    for (lo, hi), factor in zip(zip(chain.chain, chain.chain[1:]), chain.factors()):
        cls = classify_simple_factor(factor)
        out.append({"lower": list(lo.sorted()), "upper": list(hi.sorted()), **cls.to_json()})
    return out


def _is_bouquet(mg: Graph) -> bool:
    return len(mg.vertices) == 1 and bool(mg.edges) and all(e.is_omega for e in mg.edges)


def _report_finite(g: Graph, presentation: str, row_finite: bool) -> RegularityReport:
    k = condition_k(g)
    d = distinct_detours(g)
    acyclic = not has_cycle(g)
    no_sources = not g.sources
    lattice = enumerate_hs(g) if k.holds else None
    elem = elementary_subquotients(g, "combinatorial")
    z, tag = _z_table(True, k.holds, d.holds, no_sources, acyclic)
    return RegularityReport(
        presentation=presentation,
        condition_k=k.to_json(),
        distinct_detours={"holds": d.holds, "witness": _witness_json(d.witness)},
        no_sources=no_sources,
        row_finite=row_finite,
        acyclic=acyclic,
        ideal_count=lattice.count if lattice else NON_GAUGE,
        ideal_lattice=lattice.to_json() if lattice else None,
        elementary=elem.to_json(),
        pure=k.holds and d.holds,
        z_stable=z,
        provenance=tag,
        composition_series=_series_json(g, lattice) if lattice else None,
    )


def _report_extended(teg: TailExtendedGraph, presentation: str, row_finite: bool) -> RegularityReport:
    k = condition_k_extended(teg)
    d = distinct_detours_extended(teg)
    acyclic = not teg.has_cycle
    no_sources = not teg.sources
    pure = k.holds and d.holds
    if not k.holds:
        witness = {"kind": "conditionK", "vertex": k.witness}
    elif not d.holds:
        witness = {"kind": "detour", "path": _witness_json(d.witness)}
    else:
        witness = None
    z, tag = _z_table(False, k.holds, d.holds, no_sources, acyclic)
    notes = [
        "infinite tails are decided on a finite truncation; ideal data is not computed",
        "verdicts transfer to the collapsed graph through a full-corner embedding and stable invariance",
    ]
    return RegularityReport(
        presentation=presentation,
        condition_k=k.to_json(),
        distinct_detours={"holds": d.holds, "witness": _witness_json(d.witness)},
        no_sources=no_sources,
        row_finite=row_finite,
        acyclic=acyclic,
        ideal_count=None,
        ideal_lattice=None,
        elementary={"present": not pure, "method": "combinatorial", "witness": witness},
        pure=pure,
        z_stable=z,
        provenance=tag,
        notes=notes,
    )


def regularity_report(g: Graph | TailExtendedGraph) -> RegularityReport:
    """Fill every verdict for a graph, a multigraph presentation or a tail-extended graph."""
    if isinstance(g, TailExtendedGraph):
        g.check()
        report = _report_extended(g, "tail-extended", True)
        if not g.core.edges and _is_bouquet(collapse(g)):
            report.notes.append(
                "a single vertex with infinitely many loops has the Cuntz algebra O_inf as its "
                "C*-algebra, which is known to be Z-stable; the conjectural tag is kept as computed"
            )
    elif g.has_omega:
        report = _report_extended(desingularize(g), "multigraph", False)
        report.notes.insert(0, "omega receivers were desingularized before analysis")
        if _is_bouquet(g):
            report.notes.append(
                "a single vertex with infinitely many loops has the Cuntz algebra O_inf as its "
                "C*-algebra, which is known to be Z-stable; the conjectural tag is kept as computed"
            )
    elif not g.is_plain:
        report = _report_finite(g.expand(), "multigraph", True)
        report.notes.append("finite multiplicities were expanded into parallel edges")
    else:
        report = _report_finite(g, "graph", True)
    bad = report.coherent()
    if bad:
        raise InternalConsistencyError("; ".join(bad))
    return report


__all__ = [
    "AF",
    "NON_GAUGE",
    "PURELY_INFINITE",
    "ElementaryResult",
    "FactorClass",
    "RegularityReport",
    "classify_simple_factor",
    "elementary_subquotients",
    "regularity_report",
]

"""Exhaustive small-graph corpus and the cross-check runner.

Labeled multigraphs on ``v0 ... v{n-1}`` are enumerated as multisets of
``(src, dst)`` slots.  With ``n**2`` slots and ``k`` edges there are
``C(n**2 + k - 1, k)`` of them, which gives an independent closed-form
count for the enumeration.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, permutations, product
from math import comb

import jsonschema

from .classify import elementary_subquotients, regularity_report
from .desing import (
    TailPath,
    collapse,
    desingularize,
    distinct_detours_extended,
    same_multigraph,
    tail_vertex,
)
from .errors import GraphRegError, InternalConsistencyError
from .graph import OMEGA, Edge, Graph, _schema, has_cycle
from .lattice import enumerate_hs, hs_closure, quotient_graph, restriction_graph
from .lpa import lpa_equal, normal_form, represent_acyclic, represent_equal, verify_ck
from .oracles import all_paths, all_subsets, brute_closure, brute_hs_sets, random_element
from .properties import condition_k, distinct_detours

GUARD_LIMIT = 250_000


@dataclass(frozen=True)
class CorpusSpec:
    max_vertices: int
    max_edges: int
    allow_omega: bool = False
    canonicalize: bool = False

    def __post_init__(self):
        if self.max_vertices <= 0 or self.max_edges < 0:
            raise ValueError("corpus bounds must be positive")


def _vertices(n: int) -> list[str]:
    return [f"v{i}" for i in range(n)]


def closed_form_count(spec: CorpusSpec) -> int:
    """Number of labeled multigraphs within the bounds."""
    if spec.allow_omega:
        return omega_closed_form_count(spec.max_vertices, spec.max_edges)
    return sum(
        comb(n * n + k - 1, k) for n in range(1, spec.max_vertices + 1) for k in range(spec.max_edges + 1)
    )


def omega_closed_form_count(max_vertices: int, max_classes: int) -> int:
    """Graphs with at most ``max_classes`` distinct edge slots, each of
    multiplicity 1, 2 or omega."""
    return sum(
        comb(n * n, k) * 3**k for n in range(1, max_vertices + 1) for k in range(max_classes + 1)
    )


def enumerate_multigraphs(max_vertices: int, max_edges: int):
    """Every labeled multigraph, ordered by vertex count, edge count, slots."""
    for n in range(1, max_vertices + 1):
        vs = _vertices(n)
        slots = [(a, b) for a in vs for b in vs]
        for k in range(max_edges + 1):
            for chosen in combinations_with_replacement(slots, k):
                yield Graph(vs, [Edge(f"e{i}", a, b) for i, (a, b) in enumerate(chosen)])


def enumerate_omega_graphs(max_vertices: int, max_classes: int):
    """Multigraph presentations: distinct slots with multiplicity 1, 2 or omega."""
    for n in range(1, max_vertices + 1):
        vs = _vertices(n)
        slots = [(a, b) for a in vs for b in vs]
        for k in range(max_classes + 1):
            for chosen in combinations(slots, k):
                for mults in product((1, 2, OMEGA), repeat=k):
                    yield Graph(
                        vs, [Edge(f"e{i}", a, b, m) for i, ((a, b), m) in enumerate(zip(chosen, mults))]
                    )


def canonical_key(g: Graph) -> tuple:
    """Isomorphism invariant: least relabeled edge multiset over all vertex orders."""
    best = None
    for perm in permutations(range(len(g.vertices))):
        pos = dict(zip(g.vertices, perm))
        key = tuple(sorted((pos[e.src], pos[e.dst], str(e.mult)) for e in g.edges))
        if best is None or key < best:
            best = key
    return (len(g.vertices), best)


def iter_corpus(spec: CorpusSpec):
    gen = (
        enumerate_omega_graphs(spec.max_vertices, spec.max_edges)
        if spec.allow_omega
        else enumerate_multigraphs(spec.max_vertices, spec.max_edges)
    )
    if not spec.canonicalize:
        yield from gen
        return
    seen = set()
    for g in gen:
        key = canonical_key(g)
        if key not in seen:
            seen.add(key)
            yield g


# -- per-graph checks ---------------------------------------------------------------

_REPORT_VALIDATOR = None


def _report_validator():
    global _REPORT_VALIDATOR
    if _REPORT_VALIDATOR is None:
        _REPORT_VALIDATOR = jsonschema.Draft202012Validator(_schema("report.schema.json"))
    return _REPORT_VALIDATOR


def finite_checks(g: Graph, rng: random.Random, lpa_samples: int = 4) -> list[tuple[str, bool, str]]:
    """Run every cross-check on one finite graph; returns ``(name, ok, detail)``."""
    out = []

    def record(name, ok, detail=""):
        out.append((name, bool(ok), detail))

    k = condition_k(g)
    try:
        dd = distinct_detours(g)
        record("detours-vs-no-sources", True)
    except InternalConsistencyError as exc:
        record("detours-vs-no-sources", False, str(exc))
        return out
    comb_ = elementary_subquotients(g, "combinatorial")
    orac = elementary_subquotients(g, "oracle")
    record("elementary-combinatorial-vs-oracle", comb_.present == orac.present,
           f"combinatorial={comb_.present} oracle={orac.present}")
    report = regularity_report(g)
    record("zstable-yes-iff-K-and-no-sources",
           (report.z_stable == "yes") == (k.holds and not g.sources),
           f"zStable={report.z_stable} K={k.holds} sources={list(g.sources)}")
    errors = list(_report_validator().iter_errors(report.to_json()))
    record("report-schema", not errors, errors[0].message if errors else "")
    lattice = enumerate_hs(g)
    brute = sorted(brute_hs_sets(g), key=lambda S: (len(S), sorted(S)))
    record("lattice-vs-brute-force", [h.subset for h in lattice] == brute)
    bad = []
    for h in lattice:
        sub = distinct_detours(restriction_graph(g, h)).holds
        quo = distinct_detours(quotient_graph(g, h)).holds
        if dd.holds != (sub and quo):
            bad.append(sorted(h.subset))
    record("detours-hereditary", not bad, f"H={bad[:1]}")
    bad = [sorted(S) for S in all_subsets(g.vertices) if hs_closure(g, S).subset != brute_closure(g, S)]
    record("closure-vs-brute-force", not bad, f"S={bad[:1]}")
    ck = verify_ck(g)
    record("cuntz-krieger", all(ok for _, ok in ck), str([n for n, ok in ck if not ok][:3]))
    if not has_cycle(g):
        paths = all_paths(g)
        bad = []
        for _ in range(lpa_samples):
            a = random_element(rng, g, 3, paths)
            b = random_element(rng, g, 3, paths)
            same = represent_equal(represent_acyclic(g, a), represent_acyclic(g, b))
            if lpa_equal(a, b) != same:
                bad.append((str(a), str(b)))
            if not represent_equal(represent_acyclic(g, a), represent_acyclic(g, normal_form(a))):
                bad.append((str(a), "normal form"))
        record("lpa-vs-matrix-oracle", not bad, str(bad[:1]))
    return out


def omega_checks(mg: Graph) -> list[tuple[str, bool, str]]:
    out = []
    teg = desingularize(mg)
    back = collapse(teg)
    out.append(("collapse-round-trip", same_multigraph(back, mg), repr(back)))
    real = teg.realize()
    # the last vertex of each truncated tail lost its incoming tail edge
    ok = all(
        1 <= len(real.in_edges(tail_vertex(t.base, i))) <= 2
        for t in teg.tails
        for i in range(0, t.window)
    )
    out.append(("tails-row-finite", ok, ""))
    if mg.has_omega and not has_cycle(mg):
        d = distinct_detours_extended(teg)
        out.append(("acyclic-omega-has-no-detours", not d.holds and isinstance(d.witness, TailPath),
                    f"holds={d.holds} witness={d.witness}"))
    return out


def _job(args):
    index, doc, allow_omega, seed, lpa_samples = args
    from .graph import parse_graph

    g = parse_graph(doc)
    try:
        if allow_omega:
            res = omega_checks(g)
        else:
            res = finite_checks(g, random.Random(seed * 1_000_003 + index), lpa_samples)
    except GraphRegError as exc:
        res = [("no-exception", False, f"{type(exc).__name__}: {exc}")]
    return index, doc, res


@dataclass
class CorpusSummary:
    graphs: int = 0
    expected: int = 0
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and (self.expected == self.graphs or self.expected < 0)

    def to_json(self) -> dict:
        return {
            "graphs": self.graphs,
            "expected": self.expected,
            "checks": {k: {"passed": p, "failed": f} for k, (p, f) in sorted(self.counts.items())},
            "failures": self.failures,
            "ok": self.ok,
        }

    def render(self) -> str:
        lines = [f"graphs: {self.graphs} (closed form: {self.expected})"]
        width = max((len(k) for k in self.counts), default=10)
        for name, (passed, failed) in sorted(self.counts.items()):
            lines.append(f"  {name:<{width}}  passed {passed:>6}  failed {failed:>4}")
        for fail in self.failures[:20]:
            lines.append(f"COUNTEREXAMPLE {fail['check']}: {fail['graph']}  {fail['detail']}")
        lines.append("OK" if self.ok else "FAILED")
        return "\n".join(lines)


def run_corpus(spec: CorpusSpec, seed: int = 0, jobs: int = 1, lpa_samples: int = 4) -> CorpusSummary:
    """Run every cross-check over the corpus; results merged in graph order."""
    summary = CorpusSummary(expected=-1 if spec.canonicalize else closed_form_count(spec))
    tasks = ((i, g.to_json(), spec.allow_omega, seed, lpa_samples) for i, g in enumerate(iter_corpus(spec)))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = sorted(pool.map(_job, tasks, chunksize=16), key=lambda r: r[0])
    else:
        results = map(_job, tasks)
    for index, doc, res in results:
        summary.graphs += 1
        for name, ok, detail in res:
            passed, failed = summary.counts.get(name, (0, 0))
            summary.counts[name] = (passed + ok, failed + (not ok))
            if not ok:
                summary.failures.append({"index": index, "check": name, "graph": doc, "detail": detail})
    return summary


__all__ = [
    "CorpusSpec",
    "CorpusSummary",
    "GUARD_LIMIT",
    "canonical_key",
    "closed_form_count",
    "enumerate_multigraphs",
    "enumerate_omega_graphs",
    "finite_checks",
    "iter_corpus",
    "omega_checks",
    "omega_closed_form_count",
    "run_corpus",
]

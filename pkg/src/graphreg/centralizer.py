"""In-flow subgraphs, nondegenerate inclusions and approximately central matrix units.

An in-flow graph ``(F, v)`` is a finite acyclic subgraph in which every
vertex has a path to the root ``v``.  It is entrance-complete when, for every
edge of ``F``, all ambient edges with the same range (and their sources) are
in ``F``.  Trees are the special case where each vertex has exactly one
path to the root; parallel edges in multigraphs break that, which the
constructions here tolerate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import CycleError, PreconditionError, VerificationError
from .graph import Graph, Path, as_plain, has_cycle
from .lpa import LpaElement, lpa_equal, p, unit_sum


@dataclass(frozen=True)
class InFlowGraph:
    ambient: Graph = field(repr=False)
    root: str
    vertices: frozenset
    edges: frozenset

    def graph(self) -> Graph:
        return self.ambient.subgraph(self.vertices, sorted(self.edges))

    @property
    def sources(self) -> tuple[str, ...]:
        targets = {self.ambient.dst(e) for e in self.edges}
        return tuple(sorted(self.vertices - targets))

    def paths_to_root(self, start: str) -> list[Path]:
        return paths_between(self.graph(), start, self.root)

    @property
    def strict_tree(self) -> bool:
        return all(len(self.paths_to_root(x)) == 1 for x in self.vertices)

    @property
    def depth(self) -> int:
        g = self.graph()
        depth = {}

        def d(x):
            if x not in depth:
                depth[x] = max((1 + d(e.dst) for e in g.out_edges(x)), default=0)
            return depth[x]

        return max(d(x) for x in self.vertices)

    def contains(self, other: InFlowGraph) -> bool:
        return other.vertices <= self.vertices and other.edges <= self.edges

    def violations(self) -> list[str]:
        """Broken invariants; empty for a valid entrance-complete in-flow graph."""
        g = self.ambient
        out = []
        sub = self.graph()
        if has_cycle(sub):
            out.append("has a cycle")
        if any(g.src(e) == self.root for e in self.edges):
            out.append("root has an outgoing edge")
        for x in sorted(self.vertices):
            if not paths_between(sub, x, self.root):
                out.append(f"{x} does not reach the root")
        for eid in sorted(self.edges):
            for e in g.in_edges(g.dst(eid)):
                if e.id not in self.edges or e.src not in self.vertices:
                    out.append(f"not entrance-complete at {e.id}")
        return out

    def to_json(self) -> dict:
        return {
            "root": self.root,
            "vertices": sorted(self.vertices),
            "edges": sorted(self.edges),
            "sources": list(self.sources),
            "strictTree": self.strict_tree,
        }


def paths_between(g: Graph, start: str, end: str, avoid: frozenset = frozenset()) -> list[Path]:
    """All paths ``start -> end`` in an acyclic graph not visiting ``avoid``
    except possibly at ``end``."""
    out = []
    stack = [Path.trivial(start)]
    if start in avoid and start != end:
        return out
    while stack:
        q = stack.pop()
        if q.range == end:
            out.append(q)
            continue
        for e in g.out_edges(q.range):
            if e.dst in avoid and e.dst != end:
                continue
            stack.append(Path((e.id,) + q.edges, (e.dst,) + q.vertices))
    return sorted(out)


def _require_acyclic(g: Graph):
    if has_cycle(g):
        raise CycleError("ambient graph must be acyclic")


def root_only(g: Graph, v: str) -> InFlowGraph:
    g = as_plain(g)
    return InFlowGraph(g, g.check_vertex(v), frozenset([v]), frozenset())


def inflow_from_expanded(g: Graph, v: str, expanded) -> InFlowGraph:
    """The entrance-complete in-flow graph whose non-source vertices are ``expanded``."""
    g = as_plain(g)
    X = frozenset(expanded)
    edges = frozenset(e.id for x in X for e in g.in_edges(x))
    verts = frozenset([v]) | X | {g.src(e) for e in edges}
    return InFlowGraph(g, v, verts, edges)


def enumerate_inflow_graphs(g: Graph, v: str, max_depth: int | None = None) -> list[InFlowGraph]:
    """Every entrance-complete in-flow graph rooted at ``v`` (acyclic ``g``)."""
    g = as_plain(g)
    _require_acyclic(g)
    found = {root_only(g, v)}
    if g.in_edges(v):
        candidates = [x for x in g.vertices if x != v and g.in_edges(x)]
        for k in range(len(candidates) + 1):
            for extra in combinations(candidates, k):
                X = frozenset(extra) | {v}
                F = inflow_from_expanded(g, v, X)
                if F.violations():
                    continue
                found.add(F)
    out = [F for F in found if max_depth is None or F.depth <= max_depth]
    return sorted(out, key=lambda F: (len(F.edges), sorted(F.edges), sorted(F.vertices)))


def grow_inflow(g: Graph, F: InFlowGraph) -> InFlowGraph:
    """One growth step: add every edge into ``F`` and its source."""
    g = as_plain(g)
    _require_acyclic(g)
    new_edges = {e.id for x in F.vertices for e in g.in_edges(x)}
    return InFlowGraph(
        g,
        F.root,
        F.vertices | {g.src(e) for e in new_edges},
        F.edges | new_edges,
    )


# -- nondegeneracy -----------------------------------------------------------------


@dataclass(frozen=True)
class NondegeneracyTable:
    counts: dict
    paths: dict = field(repr=False, compare=False)

    @property
    def verdict(self) -> bool:
        return all(n != 1 for n in self.counts.values())

    def degenerate_pairs(self) -> list[tuple[str, str]]:
        return sorted(k for k, n in self.counts.items() if n == 1)

    def to_json(self) -> dict:
        return {
            "counts": [
                {"u": u, "w": w, "N": n} for (u, w), n in sorted(self.counts.items())
            ],
            "verdict": self.verdict,
        }


def _check_nesting(g: Graph, F: InFlowGraph, Fp: InFlowGraph):
    if F.root != Fp.root:
        raise PreconditionError("in-flow graphs have different roots")
    if not Fp.contains(F):
        raise PreconditionError("F is not contained in F'")
    for name, X in (("F", F), ("F'", Fp)):
        bad = X.violations()
        if bad:
            raise PreconditionError(f"{name} is not an entrance-complete in-flow graph: {bad[0]}")


def nondegeneracy(g: Graph, F: InFlowGraph, Fp: InFlowGraph) -> NondegeneracyTable:
    """Count, for each source ``u`` of F and ``w`` of F', the paths ``w -> u`` in
    F' meeting F only at ``u``.  Nondegenerate when no count equals 1."""
    g = as_plain(g)
    _check_nesting(g, F, Fp)
    sub = Fp.graph()
    counts, paths = {}, {}
    for u in F.sources:
        for w in Fp.sources:
            ps = paths_between(sub, w, u, avoid=F.vertices)
            counts[(u, w)] = len(ps)
            paths[(u, w)] = ps
    return NondegeneracyTable(counts, paths)


class DegenerateExtensionError(PreconditionError):
    """No nondegenerate extension was found; carries the unique-path evidence."""

    def __init__(self, message, pair=None, path=None, steps=0, last=None):
        self.pair = pair
        self.path = path
        self.steps = steps
        self.last = last
        super().__init__(message)


def find_nondegenerate_extension(g: Graph, F: InFlowGraph, max_steps: int = 64) -> InFlowGraph:
    """Grow ``F`` until the inclusion ``F <= F_n`` is nondegenerate.

    Raises :class:`DegenerateExtensionError` when the growth stalls (or
    ``max_steps`` is exhausted) with a pair still joined by a unique path.
    """
    g = as_plain(g)
    _require_acyclic(g)
    current = F
    for step in range(1, max_steps + 1):
        nxt = grow_inflow(g, current)
        table = nondegeneracy(g, F, nxt)
        if table.verdict:
            return nxt
        if nxt == current:
            pair = table.degenerate_pairs()[0]
            raise DegenerateExtensionError(
                f"growth reached a fixpoint after {step - 1} steps; "
                f"{pair[1]} has a unique path to {pair[0]}",
                pair=pair,
                path=table.paths[pair][0],
                steps=step - 1,
                last=nxt,
            )
        current = nxt
    pair = table.degenerate_pairs()[0]
    raise DegenerateExtensionError(
        f"no nondegenerate extension within {max_steps} steps",
        pair=pair,
        path=table.paths[pair][0],
        steps=max_steps,
        last=current,
    )


# -- matrix units ------------------------------------------------------------------


def decompose_2x3(n: int) -> tuple[int, int]:
    """``n = 2x + 3y``: even ``n`` uses only 2s, odd ``n`` a single 3."""
    if n < 0 or n == 1:
        raise PreconditionError(f"{n} is not a sum of 2s and 3s")
    if n % 2 == 0:
        return n // 2, 0
    return (n - 3) // 2, 1


M2_GENERATORS = tuple(f"M2.e{a}{b}" for a in (1, 2) for b in (1, 2))
M3_GENERATORS = tuple(f"M3.e{a}{b}" for a in (1, 2, 3) for b in (1, 2, 3))


def _gen_product(x: str, y: str) -> str | None:
    sx, ix = x.split(".e")
    sy, iy = y.split(".e")
    if sx != sy or ix[1] != iy[0]:
        return None
    return f"{sx}.e{ix[0]}{iy[1]}"


@dataclass
class MatrixUnitSystem:
    graph: Graph
    root: str
    blocks: dict
    units: dict
    decomposition: dict = field(default_factory=dict)
    hom_images: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    @property
    def block_sizes(self) -> dict:
        return {k: len(v) for k, v in self.blocks.items()}

    def to_json(self, with_elements: bool = True) -> dict:
        out = {
            "root": self.root,
            "blocks": [
                {"u": u, "w": w, "N": len(ps), "paths": [str(q) for q in ps]}
                for (u, w), ps in sorted(self.blocks.items())
            ],
            "unitCount": len(self.units),
            "decomposition": [
                {"u": u, "w": w, "x": x, "y": y} for (u, w), (x, y) in sorted(self.decomposition.items())
            ],
            "checks": [{"identity": name, "ok": ok} for name, ok in self.checks],
        }
        if with_elements:
            out["homImages"] = {k: str(v) for k, v in self.hom_images.items()}
        return out


def _corner_generators(Fg: Graph, host: Graph, root: str) -> list[tuple[str, LpaElement]]:
    """``s_gamma s_eta^*`` for paths of F into the root with a common source."""
    out = []
    for x in Fg.vertices:
        ps = paths_between(Fg, x, root)
        for gam in ps:
            for eta in ps:
                out.append((f"s_[{gam}]s*_[{eta}]", LpaElement.monomial(host, gam, eta)))
    return out


def _require(checks, name, ok):
    checks.append((name, ok))
    if not ok:
        raise VerificationError(f"identity failed: {name}", name)


def matrix_units(g: Graph, F: InFlowGraph, Fp: InFlowGraph) -> MatrixUnitSystem:
    """Build ``T_mu T_nu^* = sum_lambda s_{lambda mu} s_{lambda nu}^*`` over F' and
    verify the matrix-unit relations, the unit sum and commutation with the
    corner ``p_v L(F) p_v``."""
    g = as_plain(g)
    table = nondegeneracy(g, F, Fp)
    if not table.verdict:
        pair = table.degenerate_pairs()[0]
        raise PreconditionError(f"degenerate inclusion: N{pair} = 1")
    host = Fp.graph()
    Fg = F.graph()
    v = F.root
    lambdas = {u: paths_between(Fg, u, v) for u in F.sources}
    blocks = {k: ps for k, ps in table.paths.items() if ps}
    units = {}
    for (u, w), ps in blocks.items():
        for mu in ps:
            for nu in ps:
                terms = {}
                for lam in lambdas[u]:
                    a, b = lam.concat(mu), lam.concat(nu)
                    terms[(a.edges, b.edges, w)] = 1
                units[(mu, nu)] = LpaElement(host, terms)
    system = MatrixUnitSystem(host, v, blocks, units)
    checks = system.checks
    zero = LpaElement.zero(host)
    block_of = {q: k for k, ps in blocks.items() for q in ps}
    keys = list(units)
    for (m1, n1) in keys:
        for (m2, n2) in keys:
            prod = units[(m1, n1)] * units[(m2, n2)]
            if n1 == m2:
                expect = units[(m1, n2)]
            else:
                expect = zero
            ok = lpa_equal(prod, expect)
            if not ok:
                _require(checks, f"T[{m1},{n1}]T[{m2},{n2}]", False)
    checks.append(("matrix-unit multiplication table", True))
    for (m1, n1) in keys:
        if not lpa_equal(units[(m1, n1)].star(), units[(n1, m1)]):
            _require(checks, f"T[{m1},{n1}]^* = T[{n1},{m1}]", False)
    checks.append(("matrix-unit adjoints", True))
    diag = zero
    for q in block_of:
        diag = diag + units[(q, q)]
    _require(checks, f"sum of diagonal units = p_{v}", lpa_equal(diag, p(host, v)))
    # the unit sum is the in-flow identity sum s_lambda s_lambda^* over F'
    lam_all = [q for w in Fp.sources for q in paths_between(host, w, v)]
    _require(checks, f"sum over sources of F' of s_l s_l^* = p_{v}", lpa_equal(unit_sum(host, lam_all), p(host, v)))
    gens = _corner_generators(Fg, host, v)
    for (m1, n1), U in units.items():
        for name, C in gens:
            if not lpa_equal(U * C, C * U):
                _require(checks, f"T[{m1},{n1}] commutes with {name}", False)
    checks.append(("units commute with p_v L(F) p_v", True))
    return system


def m2m3_hom(g: Graph, F: InFlowGraph, Fp: InFlowGraph, system: MatrixUnitSystem | None = None) -> MatrixUnitSystem:
    """Unital *-homomorphism ``M_2 + M_3 -> p_v L(F') p_v`` commuting with
    ``p_v L(F) p_v``, assembled block-diagonally from the matrix units."""
    system = system or matrix_units(g, F, Fp)
    host = system.graph
    zero = LpaElement.zero(host)
    images = {name: zero for name in M2_GENERATORS + M3_GENERATORS}
    for key, ps in sorted(system.blocks.items()):
        x, y = decompose_2x3(len(ps))
        system.decomposition[key] = (x, y)
        slots = [("M2", 2 * c, 2) for c in range(x)] + [("M3", 2 * x + 3 * c, 3) for c in range(y)]
        for summand, start, size in slots:
            for a in range(size):
                for b in range(size):
                    name = f"{summand}.e{a + 1}{b + 1}"
                    images[name] = images[name] + system.units[(ps[start + a], ps[start + b])]
    system.hom_images = images
    checks = system.checks
    names = list(images)
    for a in names:
        for b in names:
            ab = _gen_product(a, b)
            expect = images[ab] if ab else zero
            if not lpa_equal(images[a] * images[b], expect):
                _require(checks, f"phi({a})phi({b}) = phi({ab or 0})", False)
    checks.append(("phi multiplication table", True))
    for a in names:
        sa, ia = a.split(".e")
        if not lpa_equal(images[a].star(), images[f"{sa}.e{ia[::-1]}"]):
            _require(checks, f"phi({a})^* = phi({a})^T", False)
    checks.append(("phi preserves adjoints", True))
    one = zero
    for a in names:
        if a[-1] == a[-2]:
            one = one + images[a]
    _require(checks, f"phi(1) = p_{system.root}", lpa_equal(one, p(host, system.root)))
    y1 = images["M2.e11"] + images["M3.e11"]
    y2 = images["M2.e22"] + images["M3.e22"] + images["M3.e33"]
    _require(checks, "phi(y1) phi(y2) = 0", lpa_equal(y1 * y2, zero))
    gens = _corner_generators(F.graph(), host, system.root)
    for a in names:
        for name, C in gens:
            if not lpa_equal(images[a] * C, C * images[a]):
                _require(checks, f"phi({a}) commutes with {name}", False)
    checks.append(("phi(M2+M3) commutes with p_v L(F) p_v", True))
    return system

"""Slow, obviously-correct reference computations used for cross-checking.

Nothing here shares code with the fast paths beyond the graph data model:
hereditary/saturated tests are spelled out edge by edge, closures are
intersections over all supersets, walks are enumerated explicitly.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .graph import Graph, Path, as_plain
from .lpa import LpaElement, p, ss


def is_hereditary(g: Graph, S) -> bool:
    S = set(S)
    return all(e.src in S for e in g.edges if e.dst in S)


def is_saturated(g: Graph, S) -> bool:
    S = set(S)
    for v in g.vertices:
        ins = g.in_edges(v)
        if v not in S and ins and all(e.src in S for e in ins):
            return False
    return True


def all_subsets(items):
    items = list(items)
    for k in range(len(items) + 1):
        yield from (frozenset(c) for c in combinations(items, k))


def brute_hs_sets(g: Graph) -> list[frozenset]:
    g = as_plain(g)
    return [S for S in all_subsets(g.vertices) if is_hereditary(g, S) and is_saturated(g, S)]


def brute_closure(g: Graph, S) -> frozenset:
    """Intersection of every hereditary-saturated superset of ``S``."""
    g = as_plain(g)
    S = frozenset(S)
    out = frozenset(g.vertices)
    for T in brute_hs_sets(g):
        if S <= T:
            out &= T
    return out


def brute_walks(
    g: Graph,
    start: str,
    end: str,
    bound: int,
    forbidden_interior=(),
    must_leave=None,
    allow_trivial: bool = False,
    limit: int = 2,
) -> list[tuple[str, ...]]:
    """Explicit walks ``start -> end`` of length at most ``bound``.

    Stops after ``limit`` walks have been found (``None`` for no limit).
    Edge tuples are listed in travel order.
    """
    g = as_plain(g)
    forbidden = set(forbidden_interior)
    inside = None if must_leave is None else set(must_leave)
    # prune prefixes that can no longer reach ``end``; this never drops a walk
    alive = {end}
    changed = True
    while changed:
        changed = False
        for e in g.edges:
            if e.dst in alive and e.src not in alive:
                alive.add(e.src)
                changed = True
    out = []
    if allow_trivial and start == end and inside is None:
        out.append(())
    stack = [((), start)]
    while stack and (limit is None or len(out) < limit):
        walk, v = stack.pop()
        if len(walk) >= bound:
            continue
        for e in g.out_edges(v):
            w = walk + (e.id,)
            if e.dst == end and (inside is None or any(x not in inside for x in w)):
                out.append(w)
                if limit is not None and len(out) >= limit:
                    break
            if e.dst not in forbidden and e.dst in alive:
                stack.append((w, e.dst))
    return out


def all_paths(g: Graph) -> list[Path]:
    """Every path of an acyclic graph, trivial ones included."""
    g = as_plain(g)
    out = []
    stack = [Path.trivial(v) for v in g.vertices]
    while stack:
        q = stack.pop()
        out.append(q)
        for e in g.out_edges(q.range):
            stack.append(Path((e.id,) + q.edges, (e.dst,) + q.vertices))
    return sorted(out)


def random_acyclic_graph(rng: random.Random, max_vertices: int = 6, max_edges: int = 8) -> Graph:
    """Random DAG on ``v0 ... v{n-1}`` with edges only from lower to higher index."""
    n = rng.randint(1, max_vertices)
    m = rng.randint(0, max_edges) if n > 1 else 0
    edges = []
    for k in range(m):
        i, j = sorted(rng.sample(range(n), 2))
        edges.append((f"e{k}", f"v{i}", f"v{j}"))
    return Graph([f"v{i}" for i in range(n)], edges)


def random_element(rng: random.Random, g: Graph, terms: int = 3, paths: list[Path] | None = None) -> LpaElement:
    """A random combination of ``s_mu s_nu^*`` over an acyclic graph."""
    paths = paths or all_paths(g)
    by_source = {}
    for q in paths:
        by_source.setdefault(q.source, []).append(q)
    out = LpaElement.zero(g)
    for _ in range(rng.randint(0, terms)):
        x = rng.choice(g.vertices)
        mu = rng.choice(by_source[x])
        nu = rng.choice(by_source[x])
        out = out + ss(g, mu, nu, Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
    return out


def random_relation(rng: random.Random, g: Graph, paths: list[Path] | None = None) -> LpaElement:
    """An element that is zero in the algebra: a defining relation sandwiched
    between random elements."""
    g = as_plain(g)
    regular = [v for v in g.vertices if g.in_edges(v)]
    if regular and rng.random() < 0.7:
        v = rng.choice(regular)
        rel = p(g, v)
        for e in g.in_edges(v):
            rel = rel - ss(g, g.path([e.id]), g.path([e.id]))
    elif g.edges:
        e = rng.choice(g.edges)
        one = g.path([e.id])
        rel = LpaElement.monomial(g, Path.trivial(e.src), one) * LpaElement.monomial(g, one, Path.trivial(e.src))
        rel = rel - p(g, e.src)
    else:
        return LpaElement.zero(g)
    left = random_element(rng, g, 2, paths)
    right = random_element(rng, g, 2, paths)
    if rng.random() < 0.5:
        left = left + p(g, rng.choice(g.vertices))
    if rng.random() < 0.5:
        right = right + p(g, rng.choice(g.vertices))
    return left * rel * right

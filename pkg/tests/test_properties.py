import pytest
from hypothesis import given

from conftest import NAMED, make, small_graphs
from graphreg.errors import PreconditionError
from graphreg.graph import Path, enumerate_boundary_simple_paths
from graphreg.lattice import classify_subset
from graphreg.oracles import brute_walks
from graphreg.properties import (
    condition_k,
    distinct_detour_for,
    distinct_detours,
    elementary_witness,
    is_distinct_detour,
)


class TestConditionK:
    def test_single_loop(self):
        v = condition_k(NAMED["G_loop1"])
        assert (v.holds, v.witness) == (False, "v")

    def test_two_loops(self):
        assert condition_k(NAMED["G_loop2"]).holds

    def test_acyclic_vacuous(self):
        assert condition_k(NAMED["L_3"]).holds

    @given(small_graphs())
    def test_relabel_invariant(self, g):
        h = g.relabel(edge_map={e.id: f"z{e.id}" for e in g.edges})
        assert condition_k(g) == condition_k(h)

    @given(small_graphs(max_vertices=3, max_edges=5))
    def test_against_return_path_enumeration(self, g):
        bound = len(g.vertices) ** 2 + len(g.vertices)
        expected = True
        for v in g.vertices:
            if len(brute_walks(g, v, v, bound, forbidden_interior={v}, limit=2)) == 1:
                expected = False
                break
        assert condition_k(g).holds == expected


class TestDetourFor:
    def test_loop_pair(self):
        g = NAMED["G_loop2"]
        assert distinct_detour_for(g, Path.trivial("v")).edges == ("e",)

    def test_edge_has_none(self):
        g = NAMED["G_edge"]
        assert distinct_detour_for(g, g.path(["e"])) is None

    def test_two_cycle(self):
        # [DERIVED: the only closed walks at a of length <= 4 are f.e and f.e.f.e]
        g = NAMED["C_2"]
        assert distinct_detour_for(g, Path.trivial("a")).edges == ("f", "e")

    def test_not_a_path(self):
        g = NAMED["L_3"]
        with pytest.raises(PreconditionError):
            distinct_detour_for(g, Path(("e1", "e2"), ("b", "b", "a")))

    @given(small_graphs())
    def test_returned_detour_satisfies_definition(self, g):
        for v in g.vertices:
            mu = Path.trivial(v)
            nu = distinct_detour_for(g, mu)
            if nu is not None:
                assert is_distinct_detour(g, mu, nu)
        for e in g.edges:
            mu = g.path([e.id])
            nu = distinct_detour_for(g, mu)
            if nu is not None:
                assert is_distinct_detour(g, mu, nu)

    @given(small_graphs(max_vertices=3, max_edges=4))
    def test_completeness_against_enumeration(self, g):
        # a detour exists iff some closed or connecting walk between vertices of mu leaves mu
        for v in g.vertices:
            found = distinct_detour_for(g, Path.trivial(v))
            brute = brute_walks(g, v, v, 2 * len(g.vertices), limit=1)
            assert (found is not None) == bool(brute)


class TestDistinctDetours:
    def test_no_sources(self):
        assert distinct_detours(NAMED["G_loop2"]).holds

    def test_point(self):
        d = distinct_detours(NAMED["G_empty1"])
        assert not d.holds and d.witness == Path.trivial("v")

    def test_line(self):
        d = distinct_detours(NAMED["L_3"])
        assert not d.holds and d.witness == Path.trivial("a")

    @given(small_graphs())
    def test_equals_no_sources(self, g):
        assert distinct_detours(g).holds == (not g.sources)

    def test_json(self):
        out = distinct_detours(NAMED["L_3"]).to_json()
        assert out["holds"] is False and out["witness"]["source"] == "a"


class TestElementaryWitness:
    def test_edge(self):
        g = NAMED["G_edge"]
        w = elementary_witness(g, g.path(["e"]))
        assert w.S == frozenset() and w.H.subset == frozenset()
        assert w.line_graph == g and w.dimension == 2

    def test_line(self):
        g = NAMED["L_3"]
        w = elementary_witness(g, g.path(["e2", "e1"]))
        assert w.S == frozenset() and w.line_graph == g and w.dimension == 3

    def test_point(self):
        g = NAMED["G_empty1"]
        w = elementary_witness(g, Path.trivial("v"))
        assert w.dimension == 1 and w.line_graph == g

    def test_guard(self):
        g = make("uv", [("e", "u", "v"), ("f", "v", "v"), ("h", "v", "v")])
        with pytest.raises(PreconditionError):
            elementary_witness(g, g.path(["e"]))

    def test_nontrivial_closure(self):
        # u -> v with a second source w -> v; mu = trivial path at u has no detour
        g = make("uvw", [("e", "u", "v"), ("f", "w", "v")])
        w = elementary_witness(g, Path.trivial("u"))
        assert w.dimension == 1
        assert "u" not in w.H.subset

    @given(small_graphs())
    def test_every_undetoured_path_certifies(self, g):
        for mu in enumerate_boundary_simple_paths(g):
            if distinct_detour_for(g, mu) is None:
                w = elementary_witness(g, mu)
                assert classify_subset(g, w.H.subset) == (True, True)
                assert not (w.H.subset & set(mu.vertices))
                assert w.dimension == len(mu) + 1

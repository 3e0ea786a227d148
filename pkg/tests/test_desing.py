import json

import pytest
from hypothesis import given

from conftest import NAMED, make, small_graphs
from graphreg.desing import (
    Tail,
    TailExtendedGraph,
    TailPath,
    collapse,
    condition_k_extended,
    desingularize,
    distinct_detours_extended,
    load_document,
    multiplicity_profile,
    parse_tail_extended,
    same_multigraph,
    tail_vertex,
    to_dot_extended,
)
from graphreg.errors import GraphFormatError, PreconditionError
from graphreg.graph import OMEGA, Path, parse_graph
from graphreg.properties import condition_k, distinct_detours


def mg(vertices, edges):
    return parse_graph({
        "vertices": list(vertices),
        "edges": [{"id": i, "src": s, "dst": d, "mult": m} for i, s, d, m in edges],
    })


B_OMEGA = mg("v", [("e", "v", "v", "omega")])
U_TO_V = mg("uv", [("e", "u", "v", "omega")])


class TestDesingularize:
    def test_b_omega(self):
        teg = desingularize(B_OMEGA)
        assert teg.tails == (Tail("v", (), ("v",)),)
        assert teg.core.edges == ()
        g = teg.realize()
        assert sorted(e.src for e in g.in_edges(tail_vertex("v", 1))) == ["v", "v~t2"]

    def test_single_omega_edge(self):
        teg = desingularize(U_TO_V)
        assert teg.tails == (Tail("v", (), ("u",)),)
        assert all(teg.tail_at("v").entry(i) == "u" for i in range(1, 8))

    def test_identity_without_omega(self):
        g = mg("uv", [("e", "u", "v", 2), ("f", "v", "v", 1)])
        teg = desingularize(g)
        assert teg.tails == ()
        assert teg.core == g.expand()

    def test_entry_order(self):
        # finite multiplicities first (edge-id order), then the omega sources
        g = mg("abv", [("x", "b", "v", 2), ("y", "a", "v", "omega"), ("z", "v", "v", "omega"), ("w", "a", "v", 1)])
        t = desingularize(g).tail_at("v")
        assert t.preperiod == ("a", "b", "b")
        assert t.period == ("a", "v")
        assert [t.entry(i) for i in range(1, 8)] == ["a", "b", "b", "a", "v", "a", "v"]

    def test_row_finite(self):
        g = mg("abv", [("x", "b", "v", 2), ("y", "a", "v", "omega"), ("z", "a", "b", 3)])
        teg = desingularize(g)
        h = teg.realize()
        for v in h.vertices:
            n = len(h.in_edges(v))
            if "~t" in v:
                assert n in (1, 2)
            else:
                assert n <= max(2, len(teg.core.in_edges(v)))


class TestCollapse:
    @pytest.mark.parametrize("g", [B_OMEGA, U_TO_V])
    def test_round_trip(self, g):
        back = collapse(desingularize(g))
        assert same_multigraph(back, g)

    def test_round_trip_mixed(self):
        g = mg("abv", [("x", "b", "v", 2), ("y", "a", "v", "omega"), ("z", "v", "v", "omega"), ("w", "a", "b", 1)])
        back = collapse(desingularize(g))
        assert multiplicity_profile(back) == {("b", "v"): 2, ("a", "v"): OMEGA, ("v", "v"): OMEGA, ("a", "b"): 1}

    def test_omega_absorbs_finite(self):
        g = mg("uv", [("e", "u", "v", 3), ("f", "u", "v", "omega")])
        assert multiplicity_profile(collapse(desingularize(g))) == {("u", "v"): OMEGA}

    def test_interior_exit(self):
        teg = TailExtendedGraph(NAMED["G_empty1"], (Tail("v", (), ("v",), exits=((2, "v"),)),))
        with pytest.raises(PreconditionError, match="not collapsible"):
            collapse(teg)

    def test_base_with_core_in_edge(self):
        teg = TailExtendedGraph(NAMED["G_edge"], (Tail("v", (), ("u",)),))
        with pytest.raises(PreconditionError):
            collapse(teg)

    @given(small_graphs(max_vertices=3, max_edges=4))
    def test_plain_graphs_unchanged(self, g):
        assert collapse(desingularize(g)) == g


class TestDetoursExtended:
    def test_b_omega_holds(self):
        assert distinct_detours_extended(desingularize(B_OMEGA)).holds

    def test_acyclic_fails_with_tail(self):
        d = distinct_detours_extended(desingularize(U_TO_V))
        assert not d.holds
        assert d.witness == TailPath("v", 0)
        assert d.witness.to_json() == {"kind": "tail", "base": "v", "from": "v"}

    def test_preperiod_reachable_only(self):
        # v reaches x, which feeds the tail once; the periodic source u is unreachable
        g = mg("uvx", [("a", "v", "x", 1), ("b", "x", "v", 1), ("c", "u", "v", "omega"), ("d", "u", "u", 1), ("h", "u", "u", 1)])
        d = distinct_detours_extended(desingularize(g))
        assert not d.holds and d.witness == TailPath("v", 1)

    def test_source_in_core(self):
        # tail is fine (v feeds itself) but u is a genuine source
        g = mg("uv", [("a", "u", "v", 1), ("b", "v", "v", "omega")])
        d = distinct_detours_extended(desingularize(g))
        assert not d.holds and d.witness == Path.trivial("u")

    @given(small_graphs(max_vertices=3, max_edges=5))
    def test_empty_tails_match_finite(self, g):
        teg = TailExtendedGraph(g)
        assert distinct_detours_extended(teg).holds == distinct_detours(g).holds
        assert condition_k_extended(teg).holds == condition_k(g).holds

    def test_no_source_core(self):
        assert distinct_detours_extended(TailExtendedGraph(NAMED["G_loop2"])).holds


class TestConditionKExtended:
    def test_b_omega(self):
        assert condition_k_extended(desingularize(B_OMEGA)).holds

    def test_acyclic(self):
        assert condition_k_extended(desingularize(U_TO_V)).holds

    def test_single_cycle_through_tail(self):
        # v -> u once, u => v infinitely often: every tail position lies on many cycles
        g = mg("uv", [("a", "v", "u", 1), ("b", "u", "v", "omega")])
        assert condition_k_extended(desingularize(g)).holds

    def test_unique_return_in_core(self):
        g = mg("uvx", [("a", "x", "x", 1), ("b", "u", "v", "omega")])
        v = condition_k_extended(desingularize(g))
        assert (v.holds, v.witness) == (False, "x")


class TestSerialization:
    def test_parse(self):
        teg = load_document('{"vertices":["v"],"edges":[],"tails":[{"base":"v","preperiod":[],"period":["v"]}]}')
        assert teg == desingularize(B_OMEGA)

    def test_round_trip_json(self):
        teg = desingularize(mg("abv", [("x", "b", "v", 2), ("y", "a", "v", "omega")]))
        assert parse_tail_extended(json.dumps(teg.to_json())) == teg

    def test_dangling_entry(self):
        with pytest.raises(GraphFormatError) as info:
            parse_tail_extended({"vertices": ["v"], "edges": [], "tails": [{"base": "v", "preperiod": [], "period": ["q"]}]})
        assert info.value.location == "tails[0]"

    def test_multigraph_core(self):
        doc = {"vertices": ["v"], "edges": [{"id": "e", "src": "v", "dst": "v", "mult": 2}], "tails": []}
        with pytest.raises(GraphFormatError):
            parse_tail_extended(doc)

    def test_plain_documents_stay_graphs(self):
        assert load_document('{"vertices":["v"],"edges":[]}') == NAMED["G_empty1"]

    def test_dot(self):
        out = to_dot_extended(desingularize(U_TO_V))
        assert '"u" -> "v~t1" [style=dashed];' in out
        assert '"v~..." [label="…", shape=plaintext];' in out
        assert out.startswith('digraph "E" {')


def test_window_covers_three_periods():
    t = Tail("v", ("a",), ("b", "c"))
    assert t.window == 7
    teg = TailExtendedGraph(make("abcv", []), (t,))
    assert len(teg.realize().vertices) == 4 + 7

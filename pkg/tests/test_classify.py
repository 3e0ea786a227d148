import jsonschema
import pytest
from hypothesis import given

from conftest import NAMED, make, small_graphs
from graphreg.classify import (
    AF,
    NON_GAUGE,
    PURELY_INFINITE,
    classify_simple_factor,
    elementary_subquotients,
    regularity_report,
)
from graphreg.desing import desingularize
from graphreg.errors import PreconditionError
from graphreg.graph import _schema, parse_graph
from graphreg.lattice import enumerate_hs, quotient_graph, restriction_graph

REPORT_SCHEMA = jsonschema.Draft202012Validator(_schema("report.schema.json"))

B_OMEGA = parse_graph({"vertices": ["v"], "edges": [{"id": "e", "src": "v", "dst": "v", "mult": "omega"}]})


class TestSimpleFactor:
    def test_two_loops(self):
        out = classify_simple_factor(NAMED["G_loop2"])
        assert out.kind == PURELY_INFINITE
        assert out.justification["cycle"]

    def test_point(self):
        out = classify_simple_factor(NAMED["G_empty1"])
        assert out.kind == AF and out.justification["dimension"] == 1

    def test_line(self):
        out = classify_simple_factor(NAMED["L_3"])
        assert out.kind == AF and out.justification["dimension"] == 3

    def test_cycle_without_k(self):
        with pytest.raises(PreconditionError):
            classify_simple_factor(NAMED["C_2"])

    def test_not_simple(self):
        g = make("ab", [("e", "a", "a"), ("f", "a", "a"), ("h", "b", "b"), ("k", "b", "b")])
        with pytest.raises(PreconditionError):
            classify_simple_factor(g)


class TestElementary:
    @pytest.mark.parametrize("method", ["combinatorial", "oracle"])
    def test_point(self, method):
        assert elementary_subquotients(NAMED["G_empty1"], method).present

    @pytest.mark.parametrize("method", ["combinatorial", "oracle"])
    def test_two_loops(self, method):
        out = elementary_subquotients(NAMED["G_loop2"], method)
        assert not out.present and out.witness is None

    @pytest.mark.parametrize("method", ["combinatorial", "oracle"])
    def test_single_loop(self, method):
        out = elementary_subquotients(NAMED["G_loop1"], method)
        assert out.present and out.witness == {"kind": "conditionK", "vertex": "v"}

    def test_point_witness_is_trivial_path(self):
        w = elementary_subquotients(NAMED["G_empty1"]).witness
        assert w["kind"] == "detour" and w["path"]["edges"] == [] and w["path"]["source"] == "v"

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            elementary_subquotients(NAMED["G_loop2"], "magic")

    @given(small_graphs(max_vertices=3, max_edges=4))
    def test_methods_agree(self, g):
        assert elementary_subquotients(g).present == elementary_subquotients(g, "oracle").present


class TestReport:
    def test_two_loops(self):
        r = regularity_report(NAMED["G_loop2"])
        assert r.pure and not r.elementary["present"]
        assert (r.z_stable, r.provenance) == ("yes", "thm-B")
        assert r.ideal_count == 2

    def test_line(self):
        r = regularity_report(NAMED["L_3"])
        assert not r.pure
        assert (r.z_stable, r.provenance) == ("no", "thm-C-necessity")
        assert r.distinct_detours["witness"]["source"] == "a"

    def test_bouquet(self):
        r = regularity_report(desingularize(B_OMEGA))
        assert not r.acyclic and r.condition_k["holds"] and r.distinct_detours["holds"]
        assert (r.z_stable, r.provenance) == ("conjecturally-yes", "conjecture-4.2")
        assert any("O_inf" in n for n in r.notes)
        assert r.ideal_count is None

    def test_bouquet_as_multigraph(self):
        r = regularity_report(B_OMEGA)
        assert r.presentation == "multigraph" and not r.row_finite
        assert r.z_stable == "conjecturally-yes"

    def test_acyclic_omega(self):
        g = parse_graph({"vertices": ["u", "v"], "edges": [{"id": "e", "src": "u", "dst": "v", "mult": "omega"}]})
        r = regularity_report(g)
        assert not r.distinct_detours["holds"]
        assert r.distinct_detours["witness"] == {"kind": "tail", "base": "v", "from": "v"}
        assert r.z_stable == "no"

    def test_cycle_without_k(self):
        r = regularity_report(NAMED["C_2"])
        assert r.ideal_count == NON_GAUGE and r.composition_series is None
        assert r.z_stable == "no"

    def test_finite_multiplicity(self):
        g = parse_graph({"vertices": ["v"], "edges": [{"id": "e", "src": "v", "dst": "v", "mult": 2}]})
        r = regularity_report(g)
        assert r.presentation == "multigraph" and r.z_stable == "yes"
        assert any("expanded" in n for n in r.notes)

    def test_series_factors(self):
        g = make("ab", [("e", "a", "a"), ("f", "a", "a"), ("g", "a", "b"), ("h", "b", "b"), ("k", "b", "b")])
        r = regularity_report(g)
        assert [f["class"] for f in r.composition_series] == [PURELY_INFINITE, PURELY_INFINITE]

    @pytest.mark.parametrize("name", sorted(NAMED))
    def test_schema_named(self, name):
        REPORT_SCHEMA.validate(regularity_report(NAMED[name]).to_json())

    def test_schema_extended(self):
        REPORT_SCHEMA.validate(regularity_report(desingularize(B_OMEGA)).to_json())
        REPORT_SCHEMA.validate(regularity_report(B_OMEGA).to_json())

    @given(small_graphs(max_vertices=3, max_edges=5))
    def test_coherent_and_valid(self, g):
        r = regularity_report(g)
        assert r.coherent() == []
        REPORT_SCHEMA.validate(r.to_json())
        if r.z_stable == "yes":
            assert r.pure

    @given(small_graphs(max_vertices=3, max_edges=5))
    def test_purity_passes_to_ideals_and_quotients(self, g):
        if not regularity_report(g).pure:
            return
        for h in enumerate_hs(g):
            for part in (restriction_graph(g, h.subset), quotient_graph(g, h.subset)):
                if part.vertices:
                    assert regularity_report(part).pure

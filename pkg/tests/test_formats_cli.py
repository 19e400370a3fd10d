import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperwidth import cli, formats
from hyperwidth.brambles import Bramble, grid_bramble
from hyperwidth.core import Graph, incidence_graph
from hyperwidth.decomp import exact_fwidth, exact_treewidth
from hyperwidth.formats import IsolatedVertexError, ParseError
from hyperwidth.games import marshals_win
from hyperwidth.generators import (complete_graph, cycle_graph, grid_graph, grid_spec, random_hyperbramble,
                                   random_hypergraph)
from hyperwidth.planarity import planarity_check, verify_rotation

from strategies import TRIANGLE, hypergraphs

TRIANGLE_TEXT = "p hg 3 3\n1 2\n2 3\n1 3\n"


class TestHypergraphFormat:
    def test_triangle(self):
        assert formats.parse_hypergraph(TRIANGLE_TEXT) == TRIANGLE

    def test_comments_and_blanks(self):
        text = "c a triangle\n\np hg 3 3\nc body\n1 2\n2 3\n\n1 3\n"
        assert formats.parse_hypergraph(text) == TRIANGLE

    def test_count_mismatch(self):
        with pytest.raises(ParseError) as exc:
            formats.parse_hypergraph("p hg 3 3\n1 2\n2 3\n")
        assert exc.value.line == 1 and exc.value.column == 8
        with pytest.raises(ParseError) as exc:
            formats.parse_hypergraph("p hg 3 1\n1 2\n2 3\n")
        assert exc.value.line == 3

    def test_isolated_vertex(self):
        with pytest.raises(IsolatedVertexError, match="vertex 2"):
            formats.parse_hypergraph("p hg 2 1\n1\n")

    def test_out_of_range_position(self):
        with pytest.raises(ParseError) as exc:
            formats.parse_hypergraph("p hg 3 2\n1 2\n2   9\n")
        assert (exc.value.line, exc.value.column) == (3, 5)

    def test_garbage_token(self):
        with pytest.raises(ParseError, match="integer"):
            formats.parse_hypergraph("p hg 2 1\n1 x\n")

    def test_missing_header(self):
        with pytest.raises(ParseError):
            formats.parse_hypergraph("1 2\n")

    @given(hypergraphs(max_n=8, max_m=8))
    def test_round_trip(self, h):
        assert formats.parse_hypergraph(formats.serialize_hypergraph(h)) == h


class TestGraphFormat:
    def test_six_cycle(self):
        text = "p edge 6 6\n" + "".join(f"e {i + 1} {(i + 1) % 6 + 1}\n" for i in range(6))
        assert formats.parse_graph(text) == cycle_graph(6)

    def test_loop(self):
        with pytest.raises(ParseError, match="loop"):
            formats.parse_graph("p edge 2 1\ne 1 1\n")

    def test_duplicates_merged(self):
        g = formats.parse_graph("p edge 2 2\ne 1 2\ne 2 1\n")
        assert g.edges == frozenset({(0, 1)})

    @given(st.integers(1, 7), st.data())
    def test_round_trip(self, n, data):
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        edges = data.draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
        g = Graph.from_edges(edges, vertices=range(n))
        assert formats.parse_graph(formats.serialize_graph(g)) == g


class TestOtherFormats:
    @given(hypergraphs())
    def test_ilg_round_trip(self, h):
        ilg = incidence_graph(h)
        assert formats.parse_ilg(formats.serialize_ilg(ilg)) == ilg

    def test_ilg_invariants_checked(self):
        with pytest.raises(ParseError):
            formats.parse_ilg("p ilg 2 1\ne 1 2\nl 1 N\nl 2 N\n")

    @pytest.mark.parametrize("spec", [grid_spec(5), grid_spec(6, triangulate=True, seed=3),
                                      grid_spec(7, gridoid=2, seed=1), grid_spec(6, augment=2, seed=2)])
    def test_grid_spec_round_trip(self, spec):
        assert formats.parse_grid_spec(formats.serialize_grid_spec(spec)) == spec

    def test_grid_spec_violation(self):
        with pytest.raises(ParseError, match="planarity"):
            formats.parse_grid_spec("p grid 4\nd 1 1 2 2\nd 1 2 2 1\n")

    @settings(max_examples=40, deadline=None)
    @given(hypergraphs(max_n=6, max_m=5))
    def test_td_round_trip(self, h):
        _, td = exact_treewidth(incidence_graph(h).graph)
        dec = formats.parse_td(formats.serialize_td(td))
        assert dec.decomposition == td and dec.declared_width == td.width

    @settings(max_examples=25, deadline=None)
    @given(hypergraphs(max_n=6, max_m=5))
    def test_htd_round_trip(self, h):
        for cost in ("fractional", "integral"):
            _, d = exact_fwidth(h, cost)
            dec = formats.parse_htd(formats.serialize_htd(d), h.m)
            assert dec.decomposition == d and dec.declared_width == d.width

    def test_htd_bad_label(self):
        with pytest.raises(ParseError, match="exceeds"):
            formats.parse_htd("s htd 1 3/2\nb 1 1 2 3\nl 1 1=3/2\n", 3)
        with pytest.raises(ParseError, match="out of range"):
            formats.parse_htd("s htd 1 1/1\nb 1 1 2\nl 1 4=1/1\n", 3)

    @settings(max_examples=30, deadline=None)
    @given(hypergraphs(max_n=6, max_m=5), st.integers(0, 999))
    def test_bramble_round_trip(self, h, seed):
        b = random_hyperbramble(h, seed)
        assert formats.parse_bramble(formats.serialize_bramble(b), h) == b

    def test_i_bramble_round_trip(self):
        b = grid_bramble(grid_spec(6))
        assert formats.parse_bramble(formats.serialize_bramble(b), b.host).sets == b.sets

    @settings(max_examples=25, deadline=None)
    @given(hypergraphs(max_n=5, max_m=5))
    def test_strategy_round_trip(self, h):
        k = next(k for k in range(1, h.m + 1) if marshals_win(h, k)[0])
        _, strat = marshals_win(h, k)
        back = formats.parse_strategy(formats.serialize_strategy(strat), h)
        assert back.moves == strat.moves and back.cost == k and back.monotone == strat.monotone

    def test_fractions(self):
        assert formats.fmt_frac(Fraction(6, 4)) == "3/2"
        assert formats.fmt_frac(Fraction(4, 2)) == "2"


class TestPlanarity:
    def test_grid(self):
        g = grid_graph(5)
        res = planarity_check(g)
        assert res and verify_rotation(g, res.rotation)

    def test_k5(self):
        res = planarity_check(complete_graph(5))
        assert not res and res.kind == "K5" and len(res.kuratowski) == 10

    def test_k33(self):
        g = Graph.from_edges([(a, b) for a in range(3) for b in range(3, 6)])
        res = planarity_check(g)
        assert not res and res.kind == "K3,3"
        assert set(res.kuratowski) <= g.edges

    def test_universal_triangle_incidence(self):
        g = incidence_graph(TRIANGLE.with_universal_edge()).graph
        res = planarity_check(g)
        assert res and verify_rotation(g, res.rotation)

    def test_bad_rotation(self):
        g = cycle_graph(4)
        assert not verify_rotation(g, {0: (1,), 1: (0, 2), 2: (1, 3), 3: (2, 0)})


# -- command line ---------------------------------------------------------------


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def tri(tmp_path):
    p = tmp_path / "tri.hg"
    p.write_text(TRIANGLE_TEXT)
    return p


class TestCLI:
    def test_sandwich_triangle(self, capsys, tri):
        code, out, _ = run(capsys, "sandwich", "--input", tri)
        rep = json.loads(out)
        assert code == 0 and rep["verdict"] == "pass"
        r = rep["results"]
        assert (r["fhw"], r["ghw"], r["tw_plus_one"]) == ("3/2", 2, 3)
        assert r["planar"] is True and r["chain"] == "pass"
        assert len(rep["inputs"]["input"]) == 64

    def test_compute_limit(self, capsys, tmp_path):
        p = tmp_path / "r12.hg"
        p.write_text(formats.serialize_hypergraph(random_hypergraph(12, 8, 3, 1)))
        code, _, err = run(capsys, "compute", "fhw", "--input", p)
        assert code == 3 and "limit" in err
        code, out, _ = run(capsys, "compute", "fhw", "--input", p, "--allow-bounds")
        assert code == 0 and json.loads(out)["results"]["exact"] is False

    def test_compute_values(self, capsys, tri, tmp_path):
        wit = tmp_path / "w.htd"
        code, out, _ = run(capsys, "compute", "ghw", "--input", tri, "--witness", wit)
        assert code == 0 and json.loads(out)["results"]["value"] == 2
        assert formats.parse_htd(wit.read_text(), 3).declared_width == 2
        code, out, _ = run(capsys, "compute", "tw", "--input", tri)
        assert json.loads(out)["results"]["value"] == 2

    def test_parse_error_exit(self, capsys, tmp_path):
        p = tmp_path / "bad.hg"
        p.write_text("p hg 2 1\n1\n")
        code, _, err = run(capsys, "sandwich", "--input", p)
        assert code == 2 and "vertex 2" in err
        code, _, _ = run(capsys, "sandwich", "--input", tmp_path / "missing.hg")
        assert code == 2

    def test_validate_and_tamper(self, capsys, tri, tmp_path):
        wit = tmp_path / "w.htd"
        run(capsys, "compute", "fhw", "--input", tri, "--witness", wit)
        code, out, _ = run(capsys, "validate", "htd", "--instance", tri, "--decomposition", wit)
        assert code == 0 and json.loads(out)["results"]["width"] == "3/2"
        wit.write_text(wit.read_text().replace("1=1/2 2=1/2 3=1/2", "1=1/1"))
        code, out, _ = run(capsys, "validate", "htd", "--instance", tri, "--decomposition", wit)
        rep = json.loads(out)
        assert code == 1 and rep["verdict"] == "fail"
        assert rep["results"]["offending"] == {"node": 1, "vertex": 3}

    def test_declared_width_mismatch(self, capsys, tri, tmp_path):
        wit = tmp_path / "w.htd"
        wit.write_text("s htd 1 1/1\nb 1 1 2 3\nl 1 1=1/2 2=1/2 3=1/2\n")
        code, out, _ = run(capsys, "validate", "htd", "--instance", tri, "--decomposition", wit)
        assert code == 1 and "declared width" in json.loads(out)["results"]["reason"]

    def test_convert(self, capsys, tri, tmp_path):
        td = tmp_path / "i.td"
        run(capsys, "compute", "tw", "--input", tri, "--witness", td)
        code, _, _ = run(capsys, "validate", "td", "--instance", tri, "--decomposition", td, "--incidence")
        assert code == 0
        out_file, rep_file = tmp_path / "o.htd", tmp_path / "r.json"
        code, _, _ = run(capsys, "convert", "--instance", tri, "--td", td, "--output", out_file,
                         "--report", rep_file)
        rep = json.loads(rep_file.read_text())
        assert code == 0 and rep["results"]["valid"] and rep["results"]["within_bound"]
        code, _, _ = run(capsys, "validate", "htd", "--instance", tri, "--decomposition", out_file)
        assert code == 0

    def test_certify_grid(self, capsys, tmp_path):
        spec = tmp_path / "g.spec"
        code, _, _ = run(capsys, "gen", "grid", "5", "--spec", "--output", spec)
        code, out, _ = run(capsys, "certify", "--grid-spec", spec)
        r = json.loads(out)["results"]
        assert code == 0 and r["valency"] == 5 and r["sets"] == 9 and r["exact_order"] is not None

    def test_certify_bramble(self, capsys, tri, tmp_path):
        b = tmp_path / "b.txt"
        b.write_text(formats.serialize_bramble(Bramble(TRIANGLE, ({0}, {1}, {2}))))
        code, out, _ = run(capsys, "certify", "--bramble", b, "--instance", tri, "--exact")
        r = json.loads(out)["results"]
        assert code == 0 and r["exact_order"] == "3/2" and r["lower_bound"] == 1

    def test_certify_bad_bramble(self, capsys, tmp_path):
        inst = tmp_path / "two.hg"
        inst.write_text("p hg 4 2\n1 2\n3 4\n")
        b = tmp_path / "b.txt"
        b.write_text("p bramble 2\ns 1\ns 3\n")
        code, _, err = run(capsys, "certify", "--bramble", b, "--instance", inst)
        assert code == 1 and "touch" in err

    def test_game(self, capsys, tri, tmp_path):
        strat = tmp_path / "s.txt"
        code, out, _ = run(capsys, "game", "mw", "--input", tri, "--strategy-out", strat)
        assert code == 0 and json.loads(out)["results"]["mw"] == 2
        assert formats.parse_strategy(strat.read_text(), TRIANGLE).cost == 2
        rep = tmp_path / "r.json"
        code, out, _ = run(capsys, "game", "extract", "--input", tri, "--report", rep)
        r = json.loads(rep.read_text())["results"]
        assert code == 0 and r["valid"] and r["width"] <= r["width_bound"]
        assert formats.parse_htd(out, 3).decomposition.generalized

    def test_gen(self, capsys, tmp_path):
        g = tmp_path / "k3.g"
        g.write_text("p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n")
        code, out, _ = run(capsys, "gen", "gadget", "--input", g)
        h = formats.parse_hypergraph(out)
        assert code == 0 and h.m == 24 and h.n == 15
        hg = tmp_path / "t.hg"
        hg.write_text(TRIANGLE_TEXT)
        _, out, _ = run(capsys, "gen", "universal", "--input", hg)
        assert formats.parse_hypergraph(out) == TRIANGLE.with_universal_edge()
        _, out, _ = run(capsys, "gen", "grid", "4")
        ilg = formats.parse_ilg(out)
        assert len(ilg.graph.vertices) == 16 and not ilg.n_set & ilg.m_set
        _, a, _ = run(capsys, "gen", "random", 6, 5, 3, 11)
        _, b, _ = run(capsys, "gen", "random", 6, 5, 3, 11)
        assert a == b and formats.parse_hypergraph(a).n == 6

    def test_reports_are_byte_identical(self, capsys, tri):
        for argv in (["sandwich", "--input", tri], ["game", "mw", "--input", tri],
                     ["compute", "fhw", "--input", tri]):
            _, first, _ = run(capsys, *argv)
            _, second, _ = run(capsys, *argv)
            assert first == second

    def test_entry_point(self, tri):
        res = subprocess.run([sys.executable, "-m", "hyperwidth.cli", "sandwich", "--input", str(tri)],
                             capture_output=True, text=True, check=True)
        assert json.loads(res.stdout)["results"]["ghw"] == 2

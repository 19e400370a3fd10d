from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperwidth.brambles import (Bramble, GridSpec, OrderCertificate, bramble_from_hypergraph, build_grid,
                                 contract_bramble, coord, exact_order, grid_bramble, influence,
                                 order_lower_bound, valency, verify_bramble, vid)
from hyperwidth.core import (Hypergraph, InvalidInstance, LimitExceeded,
                             delete_preserving, incidence_graph)
from hyperwidth.decomp import exact_fwidth
from hyperwidth.generators import grid_spec, random_hyperbramble, random_hypergraph

from oracles import bfs_influence
from strategies import TRIANGLE, hypergraphs


def pure(k):
    return GridSpec(k)


class TestVerify:
    def test_triangle_singletons(self):
        assert verify_bramble(Bramble(TRIANGLE, ({0}, {1}, {2})))

    def test_separate_components(self):
        h = Hypergraph.from_edges([(0, 1), (2, 3)])
        chk = verify_bramble(Bramble(h, ({0}, {2})))
        assert not chk and chk.details == {"pair": (0, 1)}

    def test_disconnected_set(self):
        h = Hypergraph.from_edges([(0, 1), (1, 2), (2, 3)])
        chk = verify_bramble(Bramble(h, ({0, 3},)))
        assert not chk and "not connected" in chk.reason

    def test_i_bramble_needs_n_vertices(self):
        ilg = incidence_graph(TRIANGLE)
        assert not verify_bramble(Bramble(ilg, ({3},)))

    def test_grid_k5(self):
        assert verify_bramble(grid_bramble(pure(5)))


class TestMeasures:
    def test_far_singletons(self):
        h = Hypergraph.from_edges([(i, i + 1) for i in range(6)])
        b = Bramble(h, ({0},))
        assert influence(b) == 1 and valency(b) == 1

    def test_disjoint_valency(self):
        assert valency(Bramble(TRIANGLE, ({0}, {1}, {2}))) == 1

    def test_empty(self):
        with pytest.raises(InvalidInstance):
            influence(Bramble(TRIANGLE, ()))

    @pytest.mark.parametrize("k", [6, 7, 8])
    def test_pure_grid_influence_by_bfs(self, k):
        b = grid_bramble(pure(k))
        ifl = influence(b)
        assert ifl == bfs_influence(b.host.graph.edges, b.union()) and ifl <= 25

    @pytest.mark.parametrize("k", [4, 6, 7, 9])
    def test_grid_valency(self, k):
        assert valency(grid_bramble(pure(k))) == 2 * k - 5
        assert valency(grid_bramble(grid_spec(k, triangulate=True, seed=k))) == 2 * k - 5

    def test_k7_valency(self):
        assert valency(grid_bramble(pure(7))) == 9


class TestOrder:
    def test_k10_certificate(self):
        cert = order_lower_bound(grid_bramble(pure(10)))
        assert (cert.size, cert.valency) == (64, 15) and cert.influence <= 25
        assert cert.lower_bound >= Fraction(64, 375) and cert.recheck()

    def test_singleton(self):
        cert = order_lower_bound(Bramble(TRIANGLE, ({0},)), with_exact=True)
        assert cert.lower_bound == 1 == cert.exact_order

    def test_triangle_singletons(self):
        assert exact_order(Bramble(TRIANGLE, ({0}, {1}, {2}))) == Fraction(3, 2)

    def test_grid_k4_exact(self):
        b = grid_bramble(pure(4))
        cert = order_lower_bound(b, with_exact=True)
        assert cert.exact_order >= Fraction(4, cert.influence * 3) and cert.recheck()

    def test_limit(self):
        with pytest.raises(LimitExceeded):
            exact_order(grid_bramble(pure(6)))

    def test_unverified(self):
        h = Hypergraph.from_edges([(0, 1), (2, 3)])
        with pytest.raises(InvalidInstance):
            order_lower_bound(Bramble(h, ({0}, {2})))

    def test_tampered_certificate(self):
        assert not OrderCertificate(4, 5, 3, Fraction(1, 3)).recheck()
        assert not OrderCertificate(4, 1, 1, Fraction(4), Fraction(1)).recheck()


class TestGrids:
    def test_pure_k4(self):
        ilg = build_grid(pure(4))
        assert len(ilg.graph.vertices) == 16 and not ilg.n_set & ilg.m_set
        assert len(ilg.n_set) == 8

    def test_triangulated_k5(self):
        spec = grid_spec(5, triangulate=True, seed=2)
        ilg = build_grid(spec)
        assert ilg.n_set == set(ilg.graph.vertices)
        assert all(u in ilg.m_set or v in ilg.m_set for u, v in ilg.graph.edges)

    def test_augmented_span(self):
        spec = grid_spec(6, augment=3, seed=5)
        build_grid(spec)
        assert spec.augmentation and max(spec.attachments().values()) <= 3

    def test_span_violation(self):
        spec = GridSpec(6, augmentation=(((1, 1), (3, 3)), ((1, 1), (4, 4))), span=1)
        with pytest.raises(InvalidInstance, match="span"):
            spec.validate()

    def test_two_diagonals_in_a_cell(self):
        spec = GridSpec(4, diagonals=(((1, 1), (2, 2)), ((1, 2), (2, 1))))
        with pytest.raises(InvalidInstance, match="planarity"):
            spec.validate()

    def test_long_diagonal(self):
        with pytest.raises(InvalidInstance):
            GridSpec(4, diagonals=(((1, 1), (3, 3)),)).validate()

    def test_bipartition_needs_bipartite(self):
        spec = GridSpec(4, diagonals=(((1, 1), (2, 2)),), scheme="bipartition")
        with pytest.raises(InvalidInstance):
            build_grid(spec)

    def test_coordinates(self):
        assert vid(5, 2, 3) == 7 and coord(5, 7) == (2, 3)

    def test_k4_sets(self):
        b = grid_bramble(pure(4))
        assert len(b) == 4
        assert b.sets[b.names.index((2, 2))] >= {vid(4, 2, 2)}
        assert vid(4, 2, 2) in b.host.n_set

    def test_k6_counts(self):
        b = grid_bramble(pure(6))
        assert len(b) == 16 and valency(b) == 7

    def test_gridoid_k8(self):
        spec = grid_spec(8, triangulate=True, seed=1)
        spec = GridSpec(8, spec.diagonals, additional=(((3, 3), (6, 6)),))
        b = grid_bramble(spec)
        assert verify_bramble(b) and len(b) == 16
        assert all(3 not in name and 6 not in name for name in b.names)

    def test_small_k(self):
        with pytest.raises(InvalidInstance):
            grid_bramble(pure(3))

    @pytest.mark.parametrize("s", [1, 2, 3])
    def test_augmented_influence_coarse_bound(self, s):
        spec = grid_spec(7, augment=s, seed=s)
        b = grid_bramble(spec)
        assert verify_bramble(b) and influence(b) <= 25 * s * s


class TestCorrespondence:
    def test_triangle(self):
        b = bramble_from_hypergraph(Bramble(TRIANGLE, ({0}, {1}, {2})))
        assert verify_bramble(b) and exact_order(b) == Fraction(3, 2)

    def test_single_set(self):
        h = random_hypergraph(5, 4, 3, 0)
        b = bramble_from_hypergraph(Bramble(h, ({2},)))
        assert exact_order(b) == 1

    @settings(max_examples=40, deadline=None)
    @given(hypergraphs(max_n=6, max_m=5), st.integers(0, 10**6))
    def test_random_agree(self, h, seed):
        b = random_hyperbramble(h, seed)
        if not b.sets:
            return
        assert verify_bramble(b)
        ib = bramble_from_hypergraph(b)
        assert verify_bramble(ib) and exact_order(ib) == exact_order(b)

    @settings(max_examples=30, deadline=None)
    @given(hypergraphs(max_n=6, max_m=5), st.integers(0, 10**6))
    def test_lower_bound_order_fhw_chain(self, h, seed):
        b = random_hyperbramble(h, seed)
        if not b.sets:
            return
        cert = order_lower_bound(b, with_exact=True)
        assert cert.lower_bound <= cert.exact_order <= exact_fwidth(h)[0]


class TestContraction:
    @pytest.mark.parametrize("seed", range(12))
    def test_order_does_not_grow(self, seed):
        h = random_hypergraph(5, 4, 3, seed)
        b = bramble_from_hypergraph(random_hyperbramble(h, seed))
        if not b.sets:
            return
        before = exact_order(b)
        for e in sorted(b.host.graph.edges):
            image = contract_bramble(b, e)
            if verify_bramble(image):
                assert exact_order(image) <= before

    def test_rejects_hyper(self):
        with pytest.raises(InvalidInstance):
            contract_bramble(Bramble(TRIANGLE, ({0},)), (0, 1))


class TestDeletion:
    def test_order_does_not_grow(self):
        # triangle 0,1,2 with a pendant path 2 - 3 - 4
        h = Hypergraph.from_edges([(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])
        ilg = incidence_graph(h)
        b = Bramble(ilg, ({0}, {1}, {2}))
        assert verify_bramble(b)
        before = exact_order(b)
        # edge-vertex 9 = {3,4} leaves together with its closed neighbourhood
        smaller = delete_preserving(ilg, {3, 4, 9})
        after = Bramble(smaller, b.sets)
        assert verify_bramble(after) and exact_order(after) <= before

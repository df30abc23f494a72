"""Hypergraphs, incidence matrices, the dual map and the simplicial invariants."""

import networkx as nx
import numpy as np
import pytest

from hyperdual.core.exceptions import LabelError, SizeError
from hyperdual.core.hypergraph import Hypergraph, SimplicialComplex
from hyperdual.models.schemas import RandomInstanceSpec
from hyperdual.oracle import make_rng, random_hypergraph

PATH = Hypergraph(3, [(0, 1), (1, 2)])
REPEATED = Hypergraph(2, [(0, 1), (0, 1)])


def _random_hypergraphs(count, seed):
    spec = RandomInstanceSpec(max_variables=12, max_edges=12)
    rng = make_rng(seed)
    return [random_hypergraph(spec, rng) for _ in range(count)]


class TestIncidence:
    def test_triangle_from_incidence(self, triangle_hypergraph):
        assert Hypergraph.from_incidence([[1, 1, 0], [1, 0, 1], [0, 1, 1]]) == triangle_hypergraph

    def test_zero_column_is_empty_edge(self):
        assert Hypergraph.from_incidence([[0], [0]]) == Hypergraph(2, [()])

    def test_empty_matrix(self):
        h = Hypergraph.from_incidence(np.zeros((0, 0)))
        assert h.vertex_count == 0 and h.edge_count == 0
        assert h.to_incidence().shape == (0, 0)

    def test_to_incidence(self):
        np.testing.assert_array_equal(PATH.to_incidence(), [[1, 0], [1, 1], [0, 1]])

    def test_repeated_edge_gives_identical_columns(self):
        np.testing.assert_array_equal(REPEATED.to_incidence(), [[1, 1], [1, 1]])

    def test_rejects_unsorted_edge(self):
        with pytest.raises(LabelError):
            Hypergraph(3, [(1, 0)])

    def test_rejects_out_of_range_vertex(self):
        with pytest.raises(LabelError):
            Hypergraph(2, [(0, 2)])

    def test_round_trip_on_random_hypergraphs(self):
        for h in _random_hypergraphs(100, seed=1):
            assert Hypergraph.from_incidence(h.to_incidence()) == h


class TestDual:
    def test_path_dual(self):
        assert PATH.dual() == Hypergraph(2, [(0,), (0, 1), (1,)])

    def test_triangle_is_self_dual(self, triangle_hypergraph):
        matrix = triangle_hypergraph.to_incidence()
        np.testing.assert_array_equal(matrix, matrix.T)
        assert triangle_hypergraph.dual() == triangle_hypergraph

    def test_empty_edge_becomes_isolated_vertex(self):
        dual = Hypergraph(2, [(), (0, 1)]).dual()
        assert dual == Hypergraph(2, [(1,), (1,)])
        assert dual.degrees() == [0, 2]

    def test_involution_and_transpose(self):
        for h in _random_hypergraphs(1000, seed=0):
            dual = h.dual()
            assert dual.dual() == h
            np.testing.assert_array_equal(dual.to_incidence(), h.to_incidence().T)


class TestPredicates:
    def test_two_section_of_single_edge_is_triangle(self):
        graph = Hypergraph(3, [(0, 1, 2)]).two_section()
        assert sorted(graph.edges) == [(0, 1), (0, 2), (1, 2)]

    def test_two_section_of_path(self):
        assert sorted(PATH.two_section().edges) == [(0, 1), (1, 2)]

    def test_two_section_of_singletons_has_no_edges(self):
        graph = Hypergraph(3, [(0,), (2,)]).two_section()
        assert graph.number_of_nodes() == 3 and graph.number_of_edges() == 0

    def test_triangle_uniform_and_regular(self, triangle_hypergraph):
        assert triangle_hypergraph.is_k_uniform(2)
        assert triangle_hypergraph.is_k_regular(2)

    def test_path_regularity(self):
        assert PATH.is_k_uniform(2)
        assert PATH.is_at_most_k_regular(2)
        assert not PATH.is_k_regular(2)

    def test_uniform_and_regular_swap_under_duality(self):
        for h in _random_hypergraphs(300, seed=2):
            dual = h.dual()
            assert h.is_k_uniform(2) == dual.is_k_regular(2)
            assert h.is_at_most_k_regular(2) == all(len(edge) <= 2 for edge in dual.edges)

    def test_berge_acyclic_examples(self, triangle_hypergraph):
        assert PATH.is_berge_acyclic()
        assert not triangle_hypergraph.is_berge_acyclic()
        assert not REPEATED.is_berge_acyclic()

    def test_helly_examples(self, triangle_hypergraph):
        assert not triangle_hypergraph.has_helly_property()
        assert Hypergraph(3, [(0, 1, 2)]).has_helly_property()

    def test_dual_of_maximal_cliques_is_helly(self):
        for seed in range(50):
            graph = nx.gnp_random_graph(8, 0.5, seed=seed)
            cliques = Hypergraph(8, [sorted(c) for c in nx.find_cliques(graph)])
            assert cliques.dual().has_helly_property()

    def test_helly_clique_cap(self):
        with pytest.raises(SizeError):
            Hypergraph(4, [(0, 1), (2, 3)]).has_helly_property(clique_cap=1)


class TestSimplicial:
    def test_nested_edges_collapse(self):
        complex_ = Hypergraph(3, [(0, 1, 2), (0, 1)]).simplicial_complex()
        assert complex_.maximal_faces == {frozenset({0, 1, 2})}

    def test_empty_hypergraph_gives_empty_complex(self):
        complex_ = Hypergraph(0).simplicial_complex()
        assert complex_.maximal_faces == frozenset()
        assert complex_.euler_characteristic() == 0
        assert complex_.connected_components() == 0

    def test_path_nerve_is_an_edge(self):
        assert PATH.nerve() == SimplicialComplex(2, [(0, 1)])

    def test_single_edge_nerve_is_a_point(self):
        assert Hypergraph(3, [(0, 1, 2)]).nerve() == SimplicialComplex(1, [(0,)])

    @pytest.mark.parametrize(
        "faces, euler, components",
        [
            ([(0, 1, 2)], 1, 1),
            ([(0, 1), (0, 2), (1, 2)], 0, 1),
            ([(0,), (1,)], 2, 2),
            ([(0, 1), (2, 3)], 2, 2),
        ],
    )
    def test_invariants(self, faces, euler, components):
        complex_ = SimplicialComplex(4, faces)
        assert complex_.euler_characteristic() == euler
        assert complex_.connected_components() == components

    def test_face_cap(self):
        with pytest.raises(SizeError):
            SimplicialComplex(25, [range(25)]).euler_characteristic(face_cap=1000)

    def test_invariants_survive_duality(self):
        for h in _random_hypergraphs(500, seed=3):
            dual = h.dual()
            assert h.nerve() == dual.simplicial_complex()
            primal_complex, dual_complex = h.simplicial_complex(), dual.simplicial_complex()
            assert primal_complex.euler_characteristic() == dual_complex.euler_characteristic()
            assert primal_complex.connected_components() == dual_complex.connected_components()
            assert h.is_berge_acyclic() == dual.is_berge_acyclic()

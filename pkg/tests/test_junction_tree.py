"""Junction tree construction, message passing and the marginals it produces."""

import itertools

import networkx as nx
import numpy as np
import pytest

from hyperdual.analysis.junction_tree import (
    MessageRecord,
    build_junction_tree,
    calibrate,
    collect_schedule,
    compile_junction_tree,
    diagnostics,
    fill_edges,
    hyperedge_marginals,
    is_perfect_elimination_order,
    marginal,
    marginal_set,
    maximal_cliques_chordal,
    pass_message,
    terminal_node,
    total_sum,
    treewidth_estimate,
    triangulate,
)
from hyperdual.core.exceptions import DegenerateDistributionError, InternalError, PreconditionError
from hyperdual.core.hypergraph import Hypergraph
from hyperdual.core.model import GraphicalModel, joint_tensor, marginal_bruteforce, tn_to_gm
from hyperdual.core.tensor import LabeledTensor, keep_labels, multiply, multiply_all
from hyperdual.models.schemas import FieldKind, RandomInstanceSpec
from hyperdual.oracle import enumerate_joint, make_rng, random_gm
from hyperdual.zoo import Fill, ising_grid, mps, mps_sandwich

from tests.helpers import assert_tensor_close


def _random_gms(count, seed):
    spec = RandomInstanceSpec()
    rng = make_rng(seed)
    return [random_gm(spec, rng) for _ in range(count)]


def _signed_gms(count, seed):
    """Random structures with potentials of plus or minus one, so separator sums often cancel to zero"""
    rng = make_rng(seed)
    spec = RandomInstanceSpec(max_size=2)
    models = []
    for _ in range(count):
        gm = random_gm(spec, rng)
        potentials = [LabeledTensor(p.labels, rng.choice([-1.0, 1.0], size=p.sizes)) for p in gm.potentials]
        models.append(GraphicalModel(gm.hypergraph, gm.sizes, potentials))
    return models


def _cancelling_gm():
    """Summing variable 0 out of the first potential gives [0, 3] on variable 1"""
    return GraphicalModel(
        Hypergraph(3, [(0, 1), (1, 2)]),
        [2, 2, 2],
        [LabeledTensor((0, 1), [[1.0, 1.0], [-1.0, 2.0]]), LabeledTensor((1, 2), [[1.0, 2.0], [3.0, 4.0]])],
    )


def _has_running_intersection(tree):
    graph = nx.Graph()
    graph.add_nodes_from(range(tree.node_count))
    graph.add_edges_from((edge.a, edge.b) for edge in tree.edges)
    if not nx.is_tree(graph):
        return False
    for variable in set(itertools.chain.from_iterable(tree.cliques)):
        holders = [k for k, clique in enumerate(tree.cliques) if variable in clique]
        if not nx.is_connected(graph.subgraph(holders)):
            return False
    return True


def _expanded(tensors, gm):
    ones = LabeledTensor.ones(range(gm.variable_count), gm.sizes, field=gm.field)
    return multiply(ones, multiply_all(tensors, field=gm.field))


class TestTriangulation:
    def test_path_needs_no_fill(self):
        path = nx.path_graph(3)
        chordal, order = triangulate(path)
        assert order == [0, 1, 2]
        assert fill_edges(path, chordal) == []

    def test_cycle_gets_one_chord(self):
        cycle = nx.cycle_graph(4)
        chordal, order = triangulate(cycle)
        assert order[0] == 0
        assert fill_edges(cycle, chordal) == [(1, 3)]
        assert nx.is_chordal(chordal)
        assert is_perfect_elimination_order(chordal, order)

    def test_explicit_order(self):
        chordal, order = triangulate(nx.cycle_graph(4), order=[1, 0, 2, 3])
        assert order == [1, 0, 2, 3]
        assert fill_edges(nx.cycle_graph(4), chordal) == [(0, 2)]

    def test_order_must_be_a_permutation(self):
        with pytest.raises(PreconditionError):
            triangulate(nx.path_graph(3), order=[0, 1])

    def test_maximal_cliques_of_chorded_cycle(self):
        graph = nx.cycle_graph(4)
        graph.add_edge(0, 2)
        assert maximal_cliques_chordal(graph, [1, 3, 0, 2]) == [(0, 1, 2), (0, 2, 3)]

    def test_maximal_cliques_need_a_perfect_order(self):
        with pytest.raises(PreconditionError):
            maximal_cliques_chordal(nx.cycle_graph(4), [0, 1, 2, 3])


class TestTreeConstruction:
    def test_chain_tree(self):
        tree = build_junction_tree([(0, 1), (1, 2)])
        assert [(e.a, e.b, e.separator) for e in tree.edges] == [(0, 1, (1,))]

    def test_no_cliques_gives_one_empty_node(self):
        tree = build_junction_tree([])
        assert tree.cliques == ((),)
        assert tree.edges == ()

    def test_disconnected_cliques_joined_by_empty_separator(self):
        tree = build_junction_tree([(0, 1), (2, 3)])
        assert [e.separator for e in tree.edges] == [()]

    def test_cycle_cliques_fail_running_intersection(self):
        with pytest.raises(InternalError):
            build_junction_tree([(0, 1), (1, 2), (2, 3), (0, 3)])

    def test_star_schedule(self):
        tree = build_junction_tree([(0, 1), (0, 2), (0, 3)])
        assert terminal_node(tree) == 3
        assert collect_schedule(tree, 3) == [(1, 0), (2, 0), (0, 3)]

    def test_potentials_go_to_first_covering_clique(self, chain_gm):
        tree = compile_junction_tree(chain_gm).tree
        assert tree.cliques == ((0, 1), (1, 2))
        assert tree.potentials == chain_gm.potentials
        assert tree.edges[0].potential == LabeledTensor.ones((1,), (2,))

    def test_every_random_instance_is_chordal_with_running_intersection(self):
        for gm in _random_gms(200, seed=0):
            compilation = compile_junction_tree(gm)
            primal = gm.hypergraph.two_section()
            primal.add_edges_from(compilation.fill_edges)
            assert nx.is_chordal(primal)
            assert _has_running_intersection(compilation.tree)


class TestMessages:
    def test_single_message(self, chain_gm):
        tree = compile_junction_tree(chain_gm).tree
        trace = []
        tree = pass_message(tree, 0, 1, trace)
        np.testing.assert_array_equal(tree.edges[0].potential.data, [4.0, 6.0])
        np.testing.assert_array_equal(tree.potentials[1].data, [[4.0, 0.0], [0.0, 6.0]])
        assert len(trace) == 1
        record = trace[0]
        assert isinstance(record, MessageRecord)
        assert (record.summed, record.multiplications, record.divisions, record.additions) == ([0], 4, 2, 2)

    def test_repeated_message_changes_nothing(self, chain_gm):
        tree = pass_message(compile_junction_tree(chain_gm).tree, 0, 1)
        again = pass_message(tree, 0, 1)
        assert again.potentials[1].allclose(tree.potentials[1])

    def test_calibrated_chain(self, chain_gm):
        tree = calibrate(compile_junction_tree(chain_gm).tree)
        np.testing.assert_array_equal(tree.potentials[0].data, [[1.0, 2.0], [3.0, 4.0]])
        np.testing.assert_array_equal(tree.potentials[1].data, [[4.0, 0.0], [0.0, 6.0]])
        np.testing.assert_array_equal(tree.edges[0].potential.data, [4.0, 6.0])

    def test_product_over_separators_is_preserved(self):
        for gm in _random_gms(40, seed=1):
            tree = compile_junction_tree(gm).tree
            joint = joint_tensor(gm)
            schedule = collect_schedule(tree, terminal_node(tree))
            schedule += [(t, s) for s, t in reversed(schedule)]
            for source, target in schedule:
                tree = pass_message(tree, source, target)
                nodes = _expanded(tree.potentials, gm)
                separators = _expanded([edge.potential for edge in tree.edges], gm)
                np.testing.assert_allclose(nodes.data / separators.data, joint.data, rtol=1e-10)

    def test_calibrated_nodes_are_clique_marginals(self):
        for gm in _random_gms(100, seed=2):
            tree = calibrate(compile_junction_tree(gm).tree)
            for clique, potential in zip(tree.cliques, tree.potentials):
                assert_tensor_close(potential, marginal_bruteforce(gm, clique))
            for edge in tree.edges:
                assert_tensor_close(edge.potential, keep_labels(tree.potentials[edge.a], edge.separator))
                assert_tensor_close(edge.potential, keep_labels(tree.potentials[edge.b], edge.separator))


class TestMarginals:
    def test_chain_marginals(self, chain_gm):
        np.testing.assert_allclose(marginal_set(chain_gm, [1]).data, [0.4, 0.6])
        np.testing.assert_allclose(marginal(chain_gm, 0).data, [[0.1, 0.2], [0.3, 0.4]])
        np.testing.assert_allclose(marginal_set(chain_gm, [0, 2]).data, [[0.1, 0.2], [0.3, 0.4]])
        assert marginal_set(chain_gm, []).item() == pytest.approx(1.0)

    def test_unnormalized_marginal(self, chain_gm):
        np.testing.assert_array_equal(marginal_set(chain_gm, [1], normalized=False).data, [4.0, 6.0])

    def test_zero_mass_cannot_be_normalized(self):
        gm = GraphicalModel(
            Hypergraph(2, [(0,), (0, 1)]),
            [2, 2],
            [LabeledTensor((0,), [0.0, 0.0]), LabeledTensor((0, 1), np.ones((2, 2)))],
        )
        np.testing.assert_array_equal(marginal_set(gm, [1], normalized=False).data, [0.0, 0.0])
        with pytest.raises(DegenerateDistributionError):
            marginal_set(gm, [1])

    def test_against_brute_force(self):
        rng = make_rng(3)
        for gm in _random_gms(200, seed=4):
            expected = [marginal_bruteforce(gm, edge) for edge in gm.hypergraph.edges]
            for actual, wanted in zip(hyperedge_marginals(gm), expected):
                assert_tensor_close(actual, wanted)
            variables = [u for u in range(gm.variable_count) if rng.random() < 0.5]
            assert_tensor_close(
                marginal_set(gm, variables, normalized=False),
                marginal_bruteforce(gm, variables),
            )
            z = enumerate_joint(gm).total()
            assert total_sum(gm) == pytest.approx(z, rel=1e-12)

    def test_independent_of_order_and_root(self):
        rng = make_rng(5)
        for gm in _random_gms(60, seed=6):
            reference = hyperedge_marginals(gm)
            z = total_sum(gm)
            for _ in range(5):
                order = [int(u) for u in rng.permutation(gm.variable_count)]
                compilation = compile_junction_tree(gm, order=order)
                root = int(rng.integers(compilation.tree.node_count))
                assert _has_running_intersection(compilation.tree)
                for actual, wanted in zip(hyperedge_marginals(gm, order=order, root=root), reference):
                    assert_tensor_close(actual, wanted, rtol=1e-12)
                assert total_sum(gm, order=order, root=root) == pytest.approx(z, rel=1e-12)


class TestSignedMarginals:
    def test_cancelling_separator(self):
        gm = _cancelling_gm()
        np.testing.assert_array_equal(marginal_set(gm, [0], normalized=False).data, [10.0, 11.0])
        np.testing.assert_array_equal(marginal_set(gm, [2], normalized=False).data, [9.0, 12.0])
        np.testing.assert_allclose(marginal_set(gm, [0]).data, [10 / 21, 11 / 21])
        np.testing.assert_array_equal(marginal(gm, 0, normalized=False).data, [[3.0, 7.0], [-3.0, 14.0]])
        assert total_sum(gm) == 21.0

    def test_hyperedge_marginals_of_cancelling_model(self):
        first, second = hyperedge_marginals(_cancelling_gm())
        np.testing.assert_array_equal(first.data, [[3.0, 7.0], [-3.0, 14.0]])
        np.testing.assert_array_equal(second.data, [[0.0, 0.0], [9.0, 12.0]])

    def test_signed_models_against_brute_force(self):
        rng = make_rng(7)
        for gm in _signed_gms(200, seed=8):
            for actual, edge in zip(hyperedge_marginals(gm), gm.hypergraph.edges):
                assert_tensor_close(actual, marginal_bruteforce(gm, edge), atol=1e-9)
            variables = [u for u in range(gm.variable_count) if rng.random() < 0.5]
            assert_tensor_close(
                marginal_set(gm, variables, normalized=False),
                marginal_bruteforce(gm, variables),
                atol=1e-9,
            )

    def test_complex_models_against_brute_force(self):
        rng = make_rng(9)
        spec = RandomInstanceSpec(field=FieldKind.COMPLEX)
        for _ in range(100):
            gm = random_gm(spec, rng)
            for actual, edge in zip(hyperedge_marginals(gm), gm.hypergraph.edges):
                assert_tensor_close(actual, marginal_bruteforce(gm, edge), atol=1e-12)
            variables = [u for u in range(gm.variable_count) if rng.random() < 0.5]
            assert_tensor_close(
                marginal_set(gm, variables, normalized=False),
                marginal_bruteforce(gm, variables),
                atol=1e-12,
            )


class TestTotalSum:
    def test_chain(self, chain_gm):
        assert total_sum(chain_gm) == 10.0

    def test_all_ones_grid(self):
        assert total_sum(ising_grid(2, 2, 2, Fill.ones())) == 16.0

    def test_empty_model(self):
        assert total_sum(GraphicalModel(Hypergraph(0), [], [])) == 1.0

    def test_empty_hyperedge_scalar(self):
        gm = GraphicalModel(Hypergraph(2, [()]), [2, 2], [LabeledTensor.scalar(3.0)])
        assert total_sum(gm) == 12.0


class TestTreewidth:
    @pytest.mark.parametrize(
        "hypergraph, width",
        [
            (Hypergraph(0), 0),
            (Hypergraph(3, [(0, 1), (1, 2)]), 1),
            (Hypergraph(4, [(0, 1), (1, 2), (2, 3), (0, 3)]), 2),
            (Hypergraph(4, [(0, 1, 2, 3)]), 3),
        ],
    )
    def test_known_widths(self, hypergraph, width):
        gm = GraphicalModel(hypergraph, [2] * hypergraph.vertex_count, [
            LabeledTensor.ones(edge, [2] * len(edge)) for edge in hypergraph.edges
        ])
        assert treewidth_estimate(gm) == width

    def test_mps_sandwich(self):
        psi = mps(4, 2, 2, Fill.random(seed=0))
        sandwich = mps_sandwich(psi, [np.eye(2)] * 4)
        compilation = compile_junction_tree(tn_to_gm(sandwich))
        tree = compilation.tree
        assert max(len(clique) for clique in tree.cliques) <= 5
        assert treewidth_estimate(sandwich) <= 4

        first, second = tree.cliques.index((0, 1, 2)), tree.cliques.index((1, 2, 3))
        edge = tree.edges[tree.edge_index(first, second)]
        assert edge.separator == (1, 2)

    def test_diagnostics(self, chain_gm):
        compilation = compile_junction_tree(chain_gm)
        trace = []
        calibrate(compilation.tree, trace)
        report = diagnostics(compilation, trace)
        assert report.cliques == [[0, 1], [1, 2]]
        assert report.elimination_order == [0, 1, 2]
        assert report.fill_edges == []
        assert [(m.source, m.target) for m in report.messages] == [(0, 1), (1, 0)]

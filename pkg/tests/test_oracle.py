"""Brute-force enumeration and the seeded random instance generators."""

import numpy as np
import pytest

from hyperdual.core.exceptions import LabelError, SizeError
from hyperdual.core.model import gm_to_tn
from hyperdual.models.schemas import FieldKind, RandomInstanceSpec
from hyperdual.oracle import enumerate_contraction, enumerate_joint, make_rng, random_gm, random_hypergraph, random_tn


class TestEnumeration:
    def test_chain_joint(self, chain_gm):
        joint = enumerate_joint(chain_gm)
        assert joint.total() == 10.0
        np.testing.assert_array_equal(joint.data[:, 1, 1], [2.0, 4.0])

    def test_chain_dual_contraction(self, chain_gm):
        state = enumerate_contraction(gm_to_tn(chain_gm))
        assert state.labels == (0, 2)
        np.testing.assert_array_equal(state.data, [[1.0, 2.0], [3.0, 4.0]])

    def test_open_nothing_gives_total(self, chain_tn):
        assert enumerate_contraction(chain_tn, open_edges=[]).item() == 10.0

    def test_unknown_edge(self, chain_tn):
        with pytest.raises(LabelError):
            enumerate_contraction(chain_tn, open_edges=[5])

    def test_state_cap(self, chain_gm):
        with pytest.raises(SizeError):
            enumerate_joint(chain_gm, state_cap=7)


class TestRandomInstances:
    def test_same_seed_same_instance(self):
        spec = RandomInstanceSpec(seed=42)
        assert random_hypergraph(spec) == random_hypergraph(spec)
        assert random_gm(spec) == random_gm(spec)
        assert random_tn(spec) == random_tn(spec)

    def test_bounds(self):
        spec = RandomInstanceSpec(max_variables=5, max_edges=4, max_size=2)
        rng = make_rng(0)
        for _ in range(1000):
            gm = random_gm(spec, rng)
            assert 1 <= gm.variable_count <= 5
            assert gm.hypergraph.edge_count <= 4
            assert all(1 <= n <= 2 for n in gm.sizes)
            for psi in gm.potentials:
                assert np.all((psi.data >= 0.1) & (psi.data < 1.0))

    def test_ordinary_edges_are_distinct(self):
        spec = RandomInstanceSpec(max_variables=8, max_edges=8)
        rng = make_rng(1)
        for _ in range(300):
            edges = [edge for edge in random_hypergraph(spec, rng).edges if len(edge) >= 2]
            repeats = len(edges) - len(set(edges))
            assert repeats <= 1

    def test_degenerate_shapes_appear(self):
        spec = RandomInstanceSpec(max_variables=12, max_edges=12)
        rng = make_rng(2)
        hypergraphs = [random_hypergraph(spec, rng) for _ in range(1000)]
        with_empty = sum(any(not edge for edge in h.edges) for h in hypergraphs)
        assert 0.06 <= with_empty / 1000 <= 0.14
        assert any(any(len(edge) == 1 for edge in h.edges) for h in hypergraphs)
        assert any(len(set(h.edges)) < h.edge_count for h in hypergraphs)

    def test_complex_potentials_lie_in_the_unit_disk(self):
        spec = RandomInstanceSpec(field=FieldKind.COMPLEX)
        rng = make_rng(3)
        for _ in range(100):
            gm = random_gm(spec, rng)
            assert gm.field == "complex"
            for psi in gm.potentials:
                assert np.all(np.abs(psi.data) <= 1.0)

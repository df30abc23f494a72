import numpy as np
import pytest

from hyperdual.core.hypergraph import Hypergraph
from hyperdual.core.model import GraphicalModel, gm_to_tn
from hyperdual.core.tensor import LabeledTensor


@pytest.fixture
def chain_gm() -> GraphicalModel:
    """psi_0 = [[1, 2], [3, 4]] on {0, 1}, identity on {1, 2}; Z = 10"""
    hypergraph = Hypergraph(3, [(0, 1), (1, 2)])
    potentials = [
        LabeledTensor((0, 1), [[1.0, 2.0], [3.0, 4.0]]),
        LabeledTensor((1, 2), np.eye(2)),
    ]
    return GraphicalModel(hypergraph, [2, 2, 2], potentials)


@pytest.fixture
def chain_tn(chain_gm):
    return gm_to_tn(chain_gm)


@pytest.fixture
def triangle_hypergraph() -> Hypergraph:
    return Hypergraph(3, [(0, 1), (0, 2), (1, 2)])

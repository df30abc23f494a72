"""Seeded random hypergraphs, models and networks for property tests.

Ordinary hyperedges are distinct with at least two vertices. On top of
them, each of three degenerate shapes (an empty hyperedge, a singleton, a
duplicate of an existing hyperedge) is injected independently with fixed
probability. Room for the injections is reserved before ordinary edges are
drawn, so with a bound of four or more edges they always fit.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from ..config.settings import DEGENERATE_SHAPE_PROBABILITY, RANDOM_BIT_GENERATOR
from ..core.hypergraph import Hypergraph
from ..core.model import GraphicalModel, TensorHypernetwork
from ..core.tensor import COMPLEX, LabeledTensor
from ..models.schemas import RandomInstanceSpec

logger = logging.getLogger(__name__)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(getattr(np.random, RANDOM_BIT_GENERATOR)(seed))


def _ordinary_edge(rng: np.random.Generator, d: int) -> Tuple[int, ...]:
    k = int(rng.integers(2, d + 1))
    return tuple(sorted(int(u) for u in rng.choice(d, size=k, replace=False)))


def random_hypergraph(spec: RandomInstanceSpec, rng: Optional[np.random.Generator] = None) -> Hypergraph:
    rng = make_rng(spec.seed) if rng is None else rng
    d = int(rng.integers(1, spec.max_variables + 1))
    empty, singleton, duplicate = (rng.random(3) < DEGENERATE_SHAPE_PROBABILITY).tolist()
    reserved = empty + singleton + 2 * duplicate

    edges: List[Tuple[int, ...]] = []
    target = int(rng.integers(0, max(0, spec.max_edges - reserved) + 1))
    for _ in range(target):
        if d < 2:
            break
        edge = _ordinary_edge(rng, d)
        if edge not in edges:
            edges.append(edge)

    if empty and len(edges) < spec.max_edges:
        edges.append(())
    if singleton and len(edges) < spec.max_edges:
        edges.append((int(rng.integers(d)),))
    if duplicate:
        if not edges and len(edges) < spec.max_edges:
            edges.append(_ordinary_edge(rng, d) if d >= 2 else (0,))
        if edges and len(edges) < spec.max_edges:
            edges.append(edges[int(rng.integers(len(edges)))])

    order = rng.permutation(len(edges))
    return Hypergraph(d, [edges[i] for i in order])


def _draw(rng: np.random.Generator, shape: Tuple[int, ...], field: str) -> np.ndarray:
    if field == COMPLEX:
        radius = np.sqrt(rng.uniform(0.0, 1.0, size=shape))
        return radius * np.exp(1j * rng.uniform(0.0, 2 * np.pi, size=shape))
    return rng.uniform(0.1, 1.0, size=shape)


def random_gm(spec: RandomInstanceSpec, rng: Optional[np.random.Generator] = None) -> GraphicalModel:
    rng = make_rng(spec.seed) if rng is None else rng
    field = spec.field.value
    hypergraph = random_hypergraph(spec, rng)
    sizes = [int(n) for n in rng.integers(1, spec.max_size + 1, size=hypergraph.vertex_count)]
    potentials = [
        LabeledTensor(edge, _draw(rng, tuple(sizes[u] for u in edge), field), field=field)
        for edge in hypergraph.edges
    ]
    return GraphicalModel(hypergraph, sizes, potentials, field=field)


def random_tn(spec: RandomInstanceSpec, rng: Optional[np.random.Generator] = None) -> TensorHypernetwork:
    """Vertices are tensors, hyperedges are indices"""
    rng = make_rng(spec.seed) if rng is None else rng
    field = spec.field.value
    hypergraph = random_hypergraph(spec, rng)
    sizes = [int(n) for n in rng.integers(1, spec.max_size + 1, size=hypergraph.edge_count)]
    tensors = [
        LabeledTensor(edges, _draw(rng, tuple(sizes[e] for e in edges), field), field=field)
        for edges in hypergraph.dual().edges
    ]
    return TensorHypernetwork(hypergraph, sizes, tensors, field=field)

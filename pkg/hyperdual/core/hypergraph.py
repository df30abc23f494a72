"""Hypergraphs, incidence matrices, duality and the simplicial invariants.

Hyperedge identity is positional: column j of the incidence matrix is
hyperedge j, so repeated hyperedges stay distinct and the dual is exact.
"""

import itertools
import logging
from typing import FrozenSet, Iterable, List, Set, Tuple

import networkx as nx
import numpy as np

from ..config.settings import FACE_CAP, HELLY_CLIQUE_CAP
from .exceptions import DomainError, LabelError, SizeError

logger = logging.getLogger(__name__)

Face = FrozenSet[int]


class Hypergraph:
    """Vertex count plus an ordered list of hyperedges (sorted vertex tuples)"""

    __slots__ = ("vertex_count", "edges")

    def __init__(self, vertex_count: int, edges: Iterable[Iterable[int]] = ()):
        vertex_count = int(vertex_count)
        if vertex_count < 0:
            raise DomainError(f"Vertex count must be non-negative, got {vertex_count}")
        normalized = []
        for j, edge in enumerate(edges):
            edge = tuple(int(u) for u in edge)
            if any(b <= a for a, b in zip(edge, edge[1:])):
                raise LabelError(f"Hyperedge {j} is not strictly increasing: {edge}")
            if edge and (edge[0] < 0 or edge[-1] >= vertex_count):
                raise LabelError(f"Hyperedge {j} has a vertex outside [0, {vertex_count}): {edge}")
            normalized.append(edge)
        self.vertex_count = vertex_count
        self.edges: Tuple[Tuple[int, ...], ...] = tuple(normalized)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @classmethod
    def from_incidence(cls, matrix) -> "Hypergraph":
        """Rows are vertices, columns are hyperedges"""
        matrix = np.asarray(matrix)
        if matrix.size == 0 and matrix.ndim < 2:
            matrix = matrix.reshape(0, 0)
        if matrix.ndim != 2:
            raise DomainError(f"Incidence matrix must be two-dimensional, got shape {matrix.shape}")
        if not np.isin(matrix, (0, 1)).all():
            raise DomainError("Incidence matrix entries must be 0 or 1")
        rows, cols = matrix.shape
        edges = [tuple(int(u) for u in np.flatnonzero(matrix[:, j])) for j in range(cols)]
        return cls(rows, edges)

    def to_incidence(self) -> np.ndarray:
        matrix = np.zeros((self.vertex_count, self.edge_count), dtype=np.uint8)
        for j, edge in enumerate(self.edges):
            matrix[list(edge), j] = 1
        return matrix

    def dual(self) -> "Hypergraph":
        """Hypergraph of the transposed incidence matrix"""
        stars: List[List[int]] = [[] for _ in range(self.vertex_count)]
        for j, edge in enumerate(self.edges):
            for u in edge:
                stars[u].append(j)
        return Hypergraph(self.edge_count, stars)

    def degrees(self) -> List[int]:
        counts = [0] * self.vertex_count
        for edge in self.edges:
            for u in edge:
                counts[u] += 1
        return counts

    def star(self, u: int) -> Tuple[int, ...]:
        """Indices of the hyperedges containing vertex u"""
        return tuple(j for j, edge in enumerate(self.edges) if u in edge)

    def two_section(self) -> nx.Graph:
        """Primal graph: i ~ j whenever some hyperedge holds both"""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.vertex_count))
        for edge in self.edges:
            graph.add_edges_from(itertools.combinations(edge, 2))
        return graph

    def is_k_uniform(self, k: int) -> bool:
        return all(len(edge) == k for edge in self.edges)

    def is_at_most_k_regular(self, k: int) -> bool:
        return all(degree <= k for degree in self.degrees())

    def is_k_regular(self, k: int) -> bool:
        return all(degree == k for degree in self.degrees())

    def incidence_graph(self) -> nx.Graph:
        """Bipartite graph on ('v', u) and ('e', j), joined by membership"""
        graph = nx.Graph()
        graph.add_nodes_from(("v", u) for u in range(self.vertex_count))
        graph.add_nodes_from(("e", j) for j in range(self.edge_count))
        for j, edge in enumerate(self.edges):
            graph.add_edges_from((("v", u), ("e", j)) for u in edge)
        return graph

    def is_berge_acyclic(self) -> bool:
        """No Berge cycle, i.e. the incidence graph is a forest"""
        graph = self.incidence_graph()
        components = nx.number_connected_components(graph) if graph.number_of_nodes() else 0
        return graph.number_of_edges() == graph.number_of_nodes() - components

    def has_helly_property(self, clique_cap: int = HELLY_CLIQUE_CAP) -> bool:
        """Every pairwise-intersecting family of hyperedges has a common vertex.

        Checked on the maximal cliques of the intersection graph. Empty
        hyperedges meet nothing and are left out.
        """
        sets = [frozenset(edge) for edge in self.edges]
        graph = nx.Graph()
        graph.add_nodes_from(j for j, edge in enumerate(sets) if edge)
        for i, j in itertools.combinations(graph.nodes, 2):
            if sets[i] & sets[j]:
                graph.add_edge(i, j)

        for count, clique in enumerate(nx.find_cliques(graph), start=1):
            if count > clique_cap:
                raise SizeError(f"Helly check exceeded the cap of {clique_cap} maximal cliques")
            if len(clique) > 1 and not frozenset.intersection(*(sets[j] for j in clique)):
                logger.debug(f"Hyperedges {sorted(clique)} meet pairwise with no common vertex")
                return False
        return True

    def simplicial_complex(self) -> "SimplicialComplex":
        """Complex whose maximal simplices are the maximal hyperedges"""
        return SimplicialComplex(self.vertex_count, _maximal_sets(frozenset(edge) for edge in self.edges))

    def nerve(self) -> "SimplicialComplex":
        """One vertex per hyperedge; a family spans a simplex when it has a common vertex"""
        stars = (frozenset(self.star(u)) for u in range(self.vertex_count))
        return SimplicialComplex(self.edge_count, _maximal_sets(stars))

    def to_dict(self) -> dict:
        return {"vertices": self.vertex_count, "edges": [list(edge) for edge in self.edges]}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges))

    def __repr__(self) -> str:
        return f"Hypergraph(vertices={self.vertex_count}, edges={[list(edge) for edge in self.edges]})"


def _maximal_sets(sets: Iterable[Face]) -> FrozenSet[Face]:
    """Inclusion-maximal non-empty sets, duplicates collapsed"""
    distinct: Set[Face] = {s for s in sets if s}
    return frozenset(s for s in distinct if not any(s < other for other in distinct))


class SimplicialComplex:
    """A complex given by its maximal faces; the face set is their downward closure"""

    __slots__ = ("vertex_count", "maximal_faces")

    def __init__(self, vertex_count: int, maximal_faces: Iterable[Iterable[int]] = ()):
        faces = frozenset(frozenset(int(u) for u in face) for face in maximal_faces)
        for face in faces:
            if not face:
                raise DomainError("Maximal faces must be non-empty")
            if min(face) < 0 or max(face) >= vertex_count:
                raise LabelError(f"Face {sorted(face)} has a vertex outside [0, {vertex_count})")
            if any(face < other for other in faces):
                raise DomainError(f"Face {sorted(face)} is contained in another maximal face")
        self.vertex_count = int(vertex_count)
        self.maximal_faces: FrozenSet[Face] = faces

    def faces(self, face_cap: int = FACE_CAP) -> Set[Face]:
        """All non-empty faces, enumerated as the union of power sets of the maximal faces"""
        for face in self.maximal_faces:
            if 2 ** len(face) - 1 > face_cap:
                raise SizeError(f"Face enumeration exceeds the cap of {face_cap} faces")
        seen: Set[Face] = set()
        for face in sorted(self.maximal_faces, key=sorted):
            members = sorted(face)
            for r in range(1, len(members) + 1):
                for subset in itertools.combinations(members, r):
                    seen.add(frozenset(subset))
                    if len(seen) > face_cap:
                        raise SizeError(f"Face enumeration exceeds the cap of {face_cap} faces")
        return seen

    def euler_characteristic(self, face_cap: int = FACE_CAP) -> int:
        return sum((-1) ** (len(face) - 1) for face in self.faces(face_cap))

    def connected_components(self) -> int:
        """Components of the union of maximal faces; vertices in no face do not count"""
        graph = nx.Graph()
        for face in self.maximal_faces:
            members = sorted(face)
            graph.add_nodes_from(members)
            graph.add_edges_from(zip(members, members[1:]))
        return nx.number_connected_components(graph) if graph.number_of_nodes() else 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.maximal_faces == other.maximal_faces

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.maximal_faces))

    def __repr__(self) -> str:
        faces = sorted(sorted(face) for face in self.maximal_faces)
        return f"SimplicialComplex(vertices={self.vertex_count}, maximal_faces={faces})"

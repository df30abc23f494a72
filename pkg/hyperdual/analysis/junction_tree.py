"""Junction tree algorithm.

Primal graph -> min-fill triangulation -> maximal cliques -> maximum-weight
spanning tree over separator sizes -> potentials -> two-phase message passing.

Message schedule: the terminal node is the last node of a breadth-first
order from the root. The first sweep collects toward the terminal (a node
sends once all its other neighbours have sent to it, smallest index first);
the second sweep is the same list reversed with directions flipped. On a
chain rooted at one end this is the plain left-to-right, right-to-left pass.
"""

import heapq
import itertools
import logging
import time
from collections import deque
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from ..core.exceptions import (
    ConstructionError,
    DegenerateDistributionError,
    DomainError,
    InternalError,
    LabelError,
    PreconditionError,
)
from ..core.model import GraphicalModel, TensorHypernetwork, tn_to_gm
from ..core.tensor import REAL, LabeledTensor, Scalar, divide, keep_labels, multiply, multiply_all
from ..models.schemas import JunctionTreeDiagnostics, MessageRecord, TreeEdgeSchema

logger = logging.getLogger(__name__)

Clique = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class TreeEdge:
    a: int
    b: int
    separator: Clique
    potential: Optional[LabeledTensor] = None


@dataclass(frozen=True, eq=False)
class JunctionTree:
    """Clique nodes with potentials, tree edges with separators, and a root"""

    cliques: Tuple[Clique, ...]
    edges: Tuple[TreeEdge, ...]
    potentials: Optional[Tuple[LabeledTensor, ...]] = None
    root: int = 0

    @property
    def node_count(self) -> int:
        return len(self.cliques)

    def neighbors(self, node: int) -> List[int]:
        result = []
        for edge in self.edges:
            if edge.a == node:
                result.append(edge.b)
            elif edge.b == node:
                result.append(edge.a)
        return sorted(result)

    def edge_index(self, a: int, b: int) -> int:
        for k, edge in enumerate(self.edges):
            if {edge.a, edge.b} == {a, b}:
                return k
        raise PreconditionError(f"Nodes {a} and {b} are not adjacent in the junction tree")

    def node_containing(self, variables: Iterable[int]) -> int:
        """Lowest-index node whose clique holds all of `variables`"""
        variables = set(variables)
        for k, clique in enumerate(self.cliques):
            if variables <= set(clique):
                return k
        raise ConstructionError(f"No clique contains {sorted(variables)}")

    def with_root(self, root: int) -> "JunctionTree":
        if not 0 <= root < self.node_count:
            raise DomainError(f"Root {root} is not a node of a tree with {self.node_count} nodes")
        return replace(self, root=root)


@dataclass(frozen=True, eq=False)
class Compilation:
    """A junction tree together with how it was built"""

    tree: JunctionTree
    order: Tuple[int, ...]
    fill_edges: Tuple[Tuple[int, int], ...]


def _fill_count(adjacency: Dict[int, set], v: int) -> int:
    return sum(1 for a, b in itertools.combinations(adjacency[v], 2) if b not in adjacency[a])


def triangulate(graph: nx.Graph, order: Optional[Sequence[int]] = None) -> Tuple[nx.Graph, List[int]]:
    """Add fill edges by vertex elimination until the graph is chordal.

    Without an explicit `order` the next vertex is the one adding the fewest
    fill edges, ties going to the smallest vertex.
    """
    if order is not None:
        order = [int(v) for v in order]
        if sorted(order) != sorted(graph.nodes):
            raise PreconditionError("Elimination order must be a permutation of the graph's vertices")

    adjacency = {v: set(graph.neighbors(v)) for v in graph.nodes}
    chordal = graph.copy()
    elimination: List[int] = []
    while adjacency:
        if order is not None:
            v = order[len(elimination)]
        else:
            v = min(adjacency, key=lambda x: (_fill_count(adjacency, x), x))
        neighbours = sorted(adjacency[v])
        for a, b in itertools.combinations(neighbours, 2):
            if b not in adjacency[a]:
                adjacency[a].add(b)
                adjacency[b].add(a)
                chordal.add_edge(a, b)
        for n in neighbours:
            adjacency[n].discard(v)
        del adjacency[v]
        elimination.append(v)

    if not is_perfect_elimination_order(chordal, elimination):
        raise InternalError("Triangulation produced a graph without a perfect elimination order")
    if chordal.number_of_nodes() and not nx.is_chordal(chordal):
        raise InternalError("Triangulation produced a non-chordal graph")
    return chordal, elimination


def is_perfect_elimination_order(graph: nx.Graph, order: Sequence[int]) -> bool:
    """Later neighbours of every vertex form a clique"""
    position = {v: i for i, v in enumerate(order)}
    if len(position) != graph.number_of_nodes() or set(position) != set(graph.nodes):
        return False
    for v in order:
        later = [n for n in graph.neighbors(v) if position[n] > position[v]]
        if not later:
            continue
        first = min(later, key=position.__getitem__)
        if any(n != first and not graph.has_edge(first, n) for n in later):
            return False
    return True


def fill_edges(graph: nx.Graph, chordal: nx.Graph) -> List[Tuple[int, int]]:
    return sorted(tuple(sorted(e)) for e in chordal.edges if not graph.has_edge(*e))


def maximal_cliques_chordal(graph: nx.Graph, order: Sequence[int]) -> List[Clique]:
    """Each vertex with its later neighbours; non-maximal sets dropped"""
    if not is_perfect_elimination_order(graph, order):
        raise PreconditionError("Graph is not chordal with respect to the given order")
    position = {v: i for i, v in enumerate(order)}
    candidates = [
        frozenset([v] + [n for n in graph.neighbors(v) if position[n] > position[v]])
        for v in order
    ]
    cliques: List[Clique] = []
    for candidate in candidates:
        if any(candidate < other for other in candidates):
            continue
        clique = tuple(sorted(candidate))
        if clique not in cliques:
            cliques.append(clique)
    return cliques


def _check_running_intersection(cliques: Sequence[Clique], edges: Sequence[TreeEdge]) -> bool:
    tree = nx.Graph()
    tree.add_nodes_from(range(len(cliques)))
    tree.add_edges_from((edge.a, edge.b) for edge in edges)
    if not nx.is_tree(tree):
        return False
    for variable in set(itertools.chain.from_iterable(cliques)):
        holders = [k for k, clique in enumerate(cliques) if variable in clique]
        if not nx.is_connected(tree.subgraph(holders)):
            return False
    return True


def build_junction_tree(
    cliques: Sequence[Iterable[int]],
    root: int = 0,
    sizes: Optional[Sequence[int]] = None,
    field: str = REAL,
) -> JunctionTree:
    """Maximum-weight spanning tree of the clique graph, weight = separator size.

    Ties go to the lexicographically smallest node pair. With `sizes` the
    node and separator potentials start as all-ones tensors.
    """
    cliques = [tuple(sorted(set(c))) for c in cliques] or [()]
    candidates = sorted(
        (
            (len(set(cliques[i]) & set(cliques[j])), i, j)
            for i, j in itertools.combinations(range(len(cliques)), 2)
        ),
        key=lambda t: (-t[0], t[1], t[2]),
    )
    components = nx.utils.UnionFind(range(len(cliques)))
    edges: List[TreeEdge] = []
    for _, i, j in candidates:
        if components[i] != components[j]:
            components.union(i, j)
            separator = tuple(sorted(set(cliques[i]) & set(cliques[j])))
            edges.append(TreeEdge(i, j, separator))

    if not _check_running_intersection(cliques, edges):
        raise InternalError("Running intersection property fails; the cliques do not come from a chordal graph")

    tree = JunctionTree(tuple(cliques), tuple(edges)).with_root(root)
    if sizes is not None:
        tree = _with_unit_potentials(tree, sizes, field)
    return tree


def _ones(variables: Clique, sizes: Sequence[int], field: str) -> LabeledTensor:
    return LabeledTensor.ones(variables, [sizes[u] for u in variables], field=field)


def _with_unit_potentials(tree: JunctionTree, sizes: Sequence[int], field: str) -> JunctionTree:
    return replace(
        tree,
        potentials=tuple(_ones(clique, sizes, field) for clique in tree.cliques),
        edges=tuple(replace(edge, potential=_ones(edge.separator, sizes, field)) for edge in tree.edges),
    )


def assign_potentials(gm: GraphicalModel, tree: JunctionTree) -> JunctionTree:
    """Each hyperedge potential goes to the lowest-index clique containing it"""
    assigned: List[List[LabeledTensor]] = [[] for _ in tree.cliques]
    for j, edge in enumerate(gm.hypergraph.edges):
        try:
            node = tree.node_containing(edge)
        except ConstructionError:
            raise ConstructionError(f"Hyperedge {j} {edge} is not covered by any clique")
        assigned[node].append(gm.potentials[j])

    potentials = tuple(
        multiply(_ones(clique, gm.sizes, gm.field), multiply_all(factors, field=gm.field))
        for clique, factors in zip(tree.cliques, assigned)
    )
    edges = tuple(replace(edge, potential=_ones(edge.separator, gm.sizes, gm.field)) for edge in tree.edges)
    return replace(tree, potentials=potentials, edges=edges)


def pass_message(
    tree: JunctionTree,
    source: int,
    target: int,
    trace: Optional[List[MessageRecord]] = None,
) -> JunctionTree:
    """psi_S <- sum over C1 minus S of psi_C1, then psi_C2 <- (new psi_S / old psi_S) * psi_C2"""
    if tree.potentials is None:
        raise PreconditionError("Junction tree has no potentials assigned")
    k = tree.edge_index(source, target)
    edge = tree.edges[k]
    source_potential = tree.potentials[source]
    separator = keep_labels(source_potential, edge.separator)
    ratio = divide(separator, edge.potential)
    target_potential = multiply(ratio, tree.potentials[target])

    if trace is not None:
        trace.append(
            MessageRecord(
                source=source,
                target=target,
                summed=[u for u in tree.cliques[source] if u not in edge.separator],
                multiplications=target_potential.size,
                divisions=separator.size,
                additions=source_potential.size - separator.size,
            )
        )

    potentials = list(tree.potentials)
    potentials[target] = target_potential
    edges = list(tree.edges)
    edges[k] = replace(edge, potential=separator)
    return replace(tree, potentials=tuple(potentials), edges=tuple(edges))


def _breadth_first(tree: JunctionTree, start: int) -> Tuple[List[int], Dict[int, int]]:
    order, parent = [start], {start: -1}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for n in tree.neighbors(node):
            if n not in parent:
                parent[n] = node
                order.append(n)
                queue.append(n)
    return order, parent


def terminal_node(tree: JunctionTree) -> int:
    """Last node of a breadth-first order from the root"""
    order, _ = _breadth_first(tree, tree.root)
    return order[-1]


def collect_schedule(tree: JunctionTree, terminal: int) -> List[Tuple[int, int]]:
    """Messages toward `terminal`; a node sends once all its children have"""
    _, parent = _breadth_first(tree, terminal)
    pending = {node: 0 for node in parent}
    for node, p in parent.items():
        if p >= 0:
            pending[p] += 1
    ready = [node for node, count in pending.items() if count == 0 and node != terminal]
    heapq.heapify(ready)
    schedule = []
    while ready:
        node = heapq.heappop(ready)
        p = parent[node]
        schedule.append((node, p))
        pending[p] -= 1
        if pending[p] == 0 and p != terminal:
            heapq.heappush(ready, p)
    return schedule


def _run(tree: JunctionTree, schedule: Iterable[Tuple[int, int]], trace: Optional[List[MessageRecord]]) -> JunctionTree:
    for source, target in schedule:
        tree = pass_message(tree, source, target, trace)
    return tree


def collect(tree: JunctionTree, terminal: Optional[int] = None, trace: Optional[List[MessageRecord]] = None) -> JunctionTree:
    """One sweep ending at `terminal`; afterwards its potential is its marginal"""
    terminal = terminal_node(tree) if terminal is None else terminal
    return _run(tree, collect_schedule(tree, terminal), trace)


def calibrate(tree: JunctionTree, trace: Optional[List[MessageRecord]] = None) -> JunctionTree:
    """Both sweeps; afterwards every node and separator holds its unnormalized marginal.

    Exact for nonnegative potentials. With signed or complex potentials a
    separator entry can cancel to zero on the first sweep; the return sweep's
    0/0 then drops that entry's mass.
    """
    logger.debug(f"Calibrating junction tree with {tree.node_count} nodes")
    start_time = time.time()

    schedule = collect_schedule(tree, terminal_node(tree))
    tree = _run(tree, schedule, trace)
    tree = _run(tree, [(target, source) for source, target in reversed(schedule)], trace)

    logger.debug(f"Calibration completed in {time.time() - start_time:.2f} seconds")
    return tree


def compile_junction_tree(
    gm: GraphicalModel,
    extra_cliques: Iterable[Iterable[int]] = (),
    order: Optional[Sequence[int]] = None,
    root: int = 0,
) -> Compilation:
    """Primal graph (plus forced cliques) -> triangulation -> tree with potentials"""
    primal = gm.hypergraph.two_section()
    for clique in extra_cliques:
        clique = sorted(set(clique))
        if any(not 0 <= u < gm.variable_count for u in clique):
            raise LabelError(f"Forced clique {clique} names unknown variables")
        primal.add_edges_from(itertools.combinations(clique, 2))

    chordal, elimination = triangulate(primal, order)
    cliques = maximal_cliques_chordal(chordal, elimination)
    tree = assign_potentials(gm, build_junction_tree(cliques, root=root))
    return Compilation(tree, tuple(elimination), tuple(fill_edges(primal, chordal)))


def _nonnegative(gm: GraphicalModel) -> bool:
    return gm.field == REAL and all(bool(np.all(p.data >= 0)) for p in gm.potentials)


def hyperedge_marginals(
    gm: GraphicalModel,
    normalized: bool = False,
    order: Optional[Sequence[int]] = None,
    root: int = 0,
) -> List[LabeledTensor]:
    """Marginal of every hyperedge.

    Nonnegative models share one calibration; signed or complex models get one
    collect per clique holding a hyperedge.
    """
    tree = compile_junction_tree(gm, order=order, root=root).tree
    nodes = [tree.node_containing(edge) for edge in gm.hypergraph.edges]
    if _nonnegative(gm):
        calibrated = calibrate(tree)
        held = {node: calibrated.potentials[node] for node in set(nodes)}
    else:
        held = {node: collect(tree, node).potentials[node] for node in set(nodes)}
    marginals = [keep_labels(held[node], edge) for node, edge in zip(nodes, gm.hypergraph.edges)]
    if normalized and marginals:
        z = held[nodes[0]].total()
        marginals = [_divide_by(m, z) for m in marginals]
    return marginals


def _divide_by(t: LabeledTensor, z: Scalar) -> LabeledTensor:
    if z == 0:
        raise DegenerateDistributionError("Total sum Z is zero; the marginal cannot be normalized")
    return LabeledTensor(t.labels, t.data / z, field=t.field)


def marginal(gm: GraphicalModel, edge_index: int, normalized: bool = True, **kwargs) -> LabeledTensor:
    """Marginal over the variables of hyperedge `edge_index`"""
    if not 0 <= edge_index < gm.hypergraph.edge_count:
        raise LabelError(f"Unknown hyperedge {edge_index}")
    return marginal_set(gm, gm.hypergraph.edges[edge_index], normalized=normalized, **kwargs)


def marginal_set(
    gm: GraphicalModel,
    variables: Iterable[int],
    normalized: bool = True,
    order: Optional[Sequence[int]] = None,
    root: int = 0,
) -> LabeledTensor:
    """Marginal over any variable set, forced into one clique before triangulation.

    A single collect toward the clique holding the set; exact for any field values.
    """
    variables = sorted(set(variables))
    extra = [variables] if variables else []
    tree = compile_junction_tree(gm, extra_cliques=extra, order=order, root=root).tree
    node = tree.node_containing(variables)
    tree = collect(tree, node)
    result = keep_labels(tree.potentials[node], variables)
    if normalized:
        result = _divide_by(result, tree.potentials[node].total())
    return result


def total_sum(gm: GraphicalModel, order: Optional[Sequence[int]] = None, root: int = 0) -> Scalar:
    """Z from a single sweep ending at the terminal node"""
    tree = compile_junction_tree(gm, order=order, root=root).tree
    terminal = terminal_node(tree)
    tree = collect(tree, terminal)
    return tree.potentials[terminal].total()


def _hypergraph_width(gm: GraphicalModel) -> int:
    primal = gm.hypergraph.two_section()
    if not primal.number_of_nodes():
        return 0
    chordal, elimination = triangulate(primal)
    return max(len(c) for c in maximal_cliques_chordal(chordal, elimination)) - 1


def treewidth_estimate(model: Union[GraphicalModel, TensorHypernetwork]) -> int:
    """Largest clique of the min-fill triangulation minus one; an upper bound on treewidth"""
    if isinstance(model, TensorHypernetwork):
        model = tn_to_gm(model)
    return _hypergraph_width(model)


def diagnostics(compilation: Compilation, trace: Sequence[MessageRecord] = ()) -> JunctionTreeDiagnostics:
    tree = compilation.tree
    return JunctionTreeDiagnostics(
        elimination_order=list(compilation.order),
        fill_edges=[list(e) for e in compilation.fill_edges],
        cliques=[list(c) for c in tree.cliques],
        root=tree.root,
        tree_edges=[TreeEdgeSchema(a=e.a, b=e.b, separator=list(e.separator)) for e in tree.edges],
        messages=list(trace),
    )

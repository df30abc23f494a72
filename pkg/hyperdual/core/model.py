"""Graphical models, tensor hypernetworks and the duality between them.

Label scheme: graphical-model variable u is the dual network's edge u, and
hyperedge j is the dual network's vertex j. Potentials are therefore labeled
by the same integers on both sides and the duality moves no data.
"""

import logging
import math
from typing import Iterable, Optional, Sequence, Tuple

from ..config.settings import STATE_SPACE_CAP
from .exceptions import FieldMismatchError, LabelError, ShapeError, SizeError
from .hypergraph import Hypergraph
from .tensor import (
    REAL,
    LabeledTensor,
    keep_labels,
    multiply,
    multiply_all,
    normalize,
    slice_tensor,
    validate_keep,
)

logger = logging.getLogger(__name__)


def _resolve_field(tensors: Sequence[LabeledTensor], field: Optional[str]) -> str:
    fields = {tensor.field for tensor in tensors}
    if field is not None:
        fields.add(field)
    if len(fields) > 1:
        raise FieldMismatchError(f"Factors mix fields {sorted(fields)}")
    return fields.pop() if fields else REAL


def _check_sizes(sizes: Sequence[int], expected: int, what: str) -> Tuple[int, ...]:
    sizes = tuple(int(n) for n in sizes)
    if len(sizes) != expected:
        raise ShapeError(f"Expected {expected} {what} sizes, got {len(sizes)}")
    if any(n < 1 for n in sizes):
        raise ShapeError(f"All {what} sizes must be at least 1, got {sizes}")
    return sizes


class GraphicalModel:
    """Hypergraph over variables, one cardinality per variable, one potential per hyperedge"""

    __slots__ = ("hypergraph", "sizes", "potentials", "field")

    def __init__(
        self,
        hypergraph: Hypergraph,
        sizes: Sequence[int],
        potentials: Sequence[LabeledTensor],
        field: Optional[str] = None,
    ):
        sizes = _check_sizes(sizes, hypergraph.vertex_count, "variable")
        potentials = tuple(potentials)
        if len(potentials) != hypergraph.edge_count:
            raise ShapeError(f"{hypergraph.edge_count} hyperedges but {len(potentials)} potentials")
        for j, (edge, psi) in enumerate(zip(hypergraph.edges, potentials)):
            if psi.labels != edge:
                raise LabelError(f"Potential {j} is labeled {psi.labels}, hyperedge is {edge}")
            expected = tuple(sizes[u] for u in edge)
            if psi.sizes != expected:
                raise ShapeError(f"Potential {j} has sizes {psi.sizes}, variables need {expected}")
        self.hypergraph = hypergraph
        self.sizes = sizes
        self.potentials = potentials
        self.field = _resolve_field(potentials, field)

    @property
    def variable_count(self) -> int:
        return self.hypergraph.vertex_count

    def state_space(self) -> int:
        return math.prod(self.sizes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphicalModel):
            return NotImplemented
        return (
            self.hypergraph == other.hypergraph
            and self.sizes == other.sizes
            and self.field == other.field
            and self.potentials == other.potentials
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"GraphicalModel({self.hypergraph!r}, sizes={self.sizes}, field={self.field})"


class TensorHypernetwork:
    """Hypergraph over tensor sites, one size per hyperedge, one tensor per vertex"""

    __slots__ = ("hypergraph", "sizes", "tensors", "field")

    def __init__(
        self,
        hypergraph: Hypergraph,
        sizes: Sequence[int],
        tensors: Sequence[LabeledTensor],
        field: Optional[str] = None,
    ):
        sizes = _check_sizes(sizes, hypergraph.edge_count, "edge")
        tensors = tuple(tensors)
        if len(tensors) != hypergraph.vertex_count:
            raise ShapeError(f"{hypergraph.vertex_count} vertices but {len(tensors)} tensors")
        incident = hypergraph.dual().edges
        for v, (edges, tensor) in enumerate(zip(incident, tensors)):
            if tensor.labels != edges:
                raise LabelError(f"Tensor {v} is labeled {tensor.labels}, incident edges are {edges}")
            expected = tuple(sizes[e] for e in edges)
            if tensor.sizes != expected:
                raise ShapeError(f"Tensor {v} has sizes {tensor.sizes}, edges need {expected}")
        self.hypergraph = hypergraph
        self.sizes = sizes
        self.tensors = tensors
        self.field = _resolve_field(tensors, field)

    def dangling_edges(self) -> Tuple[int, ...]:
        return tuple(e for e, edge in enumerate(self.hypergraph.edges) if len(edge) == 1)

    def bound_edges(self) -> Tuple[int, ...]:
        return tuple(e for e, edge in enumerate(self.hypergraph.edges) if len(edge) >= 2)

    def free_edges(self) -> Tuple[int, ...]:
        """Edges touching no vertex; each contributes a factor of its size"""
        return tuple(e for e, edge in enumerate(self.hypergraph.edges) if not edge)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorHypernetwork):
            return NotImplemented
        return (
            self.hypergraph == other.hypergraph
            and self.sizes == other.sizes
            and self.field == other.field
            and self.tensors == other.tensors
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"TensorHypernetwork({self.hypergraph!r}, sizes={self.sizes}, field={self.field})"


def gm_to_tn(gm: GraphicalModel) -> TensorHypernetwork:
    """Tensor T_C = psi_C at vertex C of the dual hypergraph"""
    return TensorHypernetwork(gm.hypergraph.dual(), gm.sizes, gm.potentials, field=gm.field)


def tn_to_gm(tn: TensorHypernetwork) -> GraphicalModel:
    """Variables are the network's edges, cliques its vertices"""
    return GraphicalModel(tn.hypergraph.dual(), tn.sizes, tn.tensors, field=tn.field)


def _check_cap(count: int, cap: int, what: str) -> None:
    if count > cap:
        raise SizeError(f"{what} has {count} entries, above the cap of {cap}")


def joint_tensor(gm: GraphicalModel, normalized: bool = False, state_cap: int = STATE_SPACE_CAP) -> LabeledTensor:
    """Product of all potentials over every variable, divided by Z when normalized"""
    _check_cap(gm.state_space(), state_cap, "Joint state space")
    variables = range(gm.variable_count)
    joint = LabeledTensor.ones(variables, gm.sizes, field=gm.field)
    joint = multiply(joint, multiply_all(gm.potentials, field=gm.field))
    if normalized:
        joint, _ = normalize(joint, probability=False)
    return joint


def tn_state_bruteforce(
    tn: TensorHypernetwork,
    open_edges: Optional[Iterable[int]] = None,
    state_cap: int = STATE_SPACE_CAP,
) -> LabeledTensor:
    """Sum the full product over every edge not kept open.

    By default the dangling edges stay open, which gives the network state.
    An explicit `open_edges` is the exact set of result labels, so dangling
    edges outside it are summed too. Edges with no vertex multiply the
    result by their size.
    """
    open_edges = set(tn.dangling_edges()) if open_edges is None else set(open_edges)
    unknown = open_edges - set(range(tn.hypergraph.edge_count))
    if unknown:
        raise LabelError(f"Unknown edges {sorted(unknown)}")
    _check_cap(math.prod(tn.sizes), state_cap, "Edge assignment space")
    edges = range(tn.hypergraph.edge_count)
    full = multiply(LabeledTensor.ones(edges, tn.sizes, field=tn.field), multiply_all(tn.tensors, field=tn.field))
    return keep_labels(full, open_edges)


def marginal_bruteforce(gm: GraphicalModel, variables: Iterable[int], state_cap: int = STATE_SPACE_CAP) -> LabeledTensor:
    """Unnormalized marginal over `variables`"""
    variables = set(variables)
    unknown = variables - set(range(gm.variable_count))
    if unknown:
        raise LabelError(f"Unknown variables {sorted(unknown)}")
    return keep_labels(joint_tensor(gm, state_cap=state_cap), variables)


def condition(gm: GraphicalModel, u: int, keep: Sequence[int]) -> GraphicalModel:
    """Restrict variable u to the values in `keep`"""
    if not 0 <= u < gm.variable_count:
        raise LabelError(f"Unknown variable {u}")
    keep = validate_keep(keep, gm.sizes[u])
    sizes = list(gm.sizes)
    sizes[u] = len(keep)
    potentials = [
        slice_tensor(psi, u, keep) if u in edge else psi
        for edge, psi in zip(gm.hypergraph.edges, gm.potentials)
    ]
    return GraphicalModel(gm.hypergraph, sizes, potentials, field=gm.field)


def condition_tn(tn: TensorHypernetwork, e: int, keep: Sequence[int]) -> TensorHypernetwork:
    """Restrict edge e to the indices in `keep` in every tensor carrying it"""
    if not 0 <= e < tn.hypergraph.edge_count:
        raise LabelError(f"Unknown edge {e}")
    keep = validate_keep(keep, tn.sizes[e])
    sizes = list(tn.sizes)
    sizes[e] = len(keep)
    members = set(tn.hypergraph.edges[e])
    tensors = [slice_tensor(t, e, keep) if v in members else t for v, t in enumerate(tn.tensors)]
    return TensorHypernetwork(tn.hypergraph, sizes, tensors, field=tn.field)

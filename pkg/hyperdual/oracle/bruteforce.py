"""Reference semantics by plain enumeration.

Nothing here goes through the tensor algebra: every entry is a loop over
assignments and a product of indexed factor entries.
"""

import itertools
import logging
import time
from typing import Iterable, Optional

import numpy as np

from ..config.settings import STATE_SPACE_CAP
from ..core.exceptions import LabelError, SizeError
from ..core.model import GraphicalModel, TensorHypernetwork
from ..core.tensor import COMPLEX, LabeledTensor

logger = logging.getLogger(__name__)


def _space(sizes, cap: int) -> int:
    count = 1
    for n in sizes:
        count *= n
    if count > cap:
        raise SizeError(f"Enumeration over {count} assignments exceeds the cap of {cap}")
    return count


def enumerate_joint(gm: GraphicalModel, state_cap: int = STATE_SPACE_CAP) -> LabeledTensor:
    """Unnormalized joint, one assignment at a time"""
    count = _space(gm.sizes, state_cap)
    logger.debug(f"Enumerating {count} joint assignments")
    start_time = time.time()

    dtype = np.complex128 if gm.field == COMPLEX else np.float64
    joint = np.zeros(gm.sizes, dtype=dtype)
    for x in itertools.product(*(range(n) for n in gm.sizes)):
        value = dtype(1)
        for edge, psi in zip(gm.hypergraph.edges, gm.potentials):
            value *= psi.data[tuple(x[u] for u in edge)]
        joint[x] = value

    logger.debug(f"Joint enumeration completed in {time.time() - start_time:.2f} seconds")
    return LabeledTensor(range(gm.variable_count), joint, field=gm.field)


def enumerate_contraction(
    tn: TensorHypernetwork,
    open_edges: Optional[Iterable[int]] = None,
    state_cap: int = STATE_SPACE_CAP,
) -> LabeledTensor:
    """Network state by looping over every edge assignment.

    `open_edges` (the dangling edges by default) index the result; all other
    edges are summed, including edges touching no vertex.
    """
    edge_count = tn.hypergraph.edge_count
    if open_edges is None:
        open_edges = {e for e, edge in enumerate(tn.hypergraph.edges) if len(edge) == 1}
    open_edges = set(open_edges)
    if any(not 0 <= e < edge_count for e in open_edges):
        raise LabelError(f"Unknown edges in {sorted(open_edges)}")
    count = _space(tn.sizes, state_cap)
    logger.debug(f"Enumerating {count} edge assignments")

    kept = sorted(open_edges)
    dtype = np.complex128 if tn.field == COMPLEX else np.float64
    state = np.zeros([tn.sizes[e] for e in kept], dtype=dtype)
    for x in itertools.product(*(range(n) for n in tn.sizes)):
        value = dtype(1)
        for tensor in tn.tensors:
            value *= tensor.data[tuple(x[e] for e in tensor.labels)]
        state[tuple(x[e] for e in kept)] += value
    return LabeledTensor(kept, state, field=tn.field)

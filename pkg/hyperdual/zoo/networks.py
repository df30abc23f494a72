"""Constructors for the standard networks and models.

Edge ids are assigned per family:
  mps / peps     dangling edge v for site v, then bonds in row-major order (right, then down)
  tucker         dangling edges 0..d-1, bonds d..2d-1; vertex 0 is the core
  cp             dangling edges 0..d-1, the shared rank edge is d
  mps_sandwich   site i owns p=4i (ket), q=4i+1 (bra), t=4i+2 (top bond), b=4i+3 (bottom bond);
                 vertices are the ket row 0..d-1, the blocks d..2d-1, the bra row 2d..3d-1

Tensor data is drawn vertex by vertex with axes in ascending label order, so
the same seed gives the same numbers for a 1 x k PEPS and a k-site MPS.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..config.settings import RANDOM_BIT_GENERATOR
from ..core.exceptions import DomainError, ShapeError
from ..core.hypergraph import Hypergraph
from ..core.model import GraphicalModel, TensorHypernetwork
from ..core.tensor import COMPLEX, REAL, LabeledTensor, dtype_for
from ..models.schemas import FillMode, ZooFamily, ZooSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Fill:
    """How constructor tensors are populated"""

    mode: FillMode = FillMode.ONES
    seed: Optional[int] = None
    field: str = REAL
    data: Tuple[np.ndarray, ...] = ()

    @classmethod
    def ones(cls, field: str = REAL) -> "Fill":
        return cls(FillMode.ONES, field=field)

    @classmethod
    def random(cls, seed: int, field: str = REAL) -> "Fill":
        return cls(FillMode.RANDOM, seed=seed, field=field)

    @classmethod
    def from_data(cls, arrays: Sequence, field: Optional[str] = None) -> "Fill":
        arrays = tuple(np.asarray(a) for a in arrays)
        if field is None:
            field = COMPLEX if any(np.iscomplexobj(a) for a in arrays) else REAL
        return cls(FillMode.DATA, field=field, data=arrays)

    def arrays(self, shapes: Sequence[Tuple[int, ...]]) -> Iterator[np.ndarray]:
        """One array per requested shape, in order"""
        dtype_for(self.field)
        if self.mode == FillMode.ONES:
            for shape in shapes:
                yield np.ones(shape)
        elif self.mode == FillMode.RANDOM:
            if self.seed is None:
                raise DomainError("Random fill needs a seed")
            rng = np.random.Generator(getattr(np.random, RANDOM_BIT_GENERATOR)(self.seed))
            for shape in shapes:
                if self.field == COMPLEX:
                    # uniform on the unit disk
                    radius = np.sqrt(rng.uniform(0.0, 1.0, size=shape))
                    angle = rng.uniform(0.0, 2 * np.pi, size=shape)
                    yield radius * np.exp(1j * angle)
                else:
                    yield rng.uniform(-1.0, 1.0, size=shape)
        else:
            if len(self.data) != len(shapes):
                raise ShapeError(f"Expected {len(shapes)} arrays, got {len(self.data)}")
            for i, (array, shape) in enumerate(zip(self.data, shapes)):
                if array.shape != tuple(shape):
                    raise ShapeError(f"Array {i} has shape {array.shape}, expected {tuple(shape)}")
                yield array


def _check_positive(**values: int) -> None:
    for name, value in values.items():
        if value < 1:
            raise DomainError(f"{name} must be at least 1, got {value}")


def _network(hypergraph: Hypergraph, sizes: Sequence[int], fill: Fill) -> TensorHypernetwork:
    incident = hypergraph.dual().edges
    shapes = [tuple(sizes[e] for e in edges) for edges in incident]
    tensors = [LabeledTensor(edges, array, field=fill.field) for edges, array in zip(incident, fill.arrays(shapes))]
    return TensorHypernetwork(hypergraph, sizes, tensors, field=fill.field)


def _model(hypergraph: Hypergraph, sizes: Sequence[int], fill: Fill) -> GraphicalModel:
    shapes = [tuple(sizes[u] for u in edge) for edge in hypergraph.edges]
    potentials = [LabeledTensor(edge, array, field=fill.field) for edge, array in zip(hypergraph.edges, fill.arrays(shapes))]
    return GraphicalModel(hypergraph, sizes, potentials, field=fill.field)


def _grid_edges(rows: int, cols: int) -> List[Tuple[int, int]]:
    edges = []
    for i in range(rows):
        for j in range(cols):
            v = i * cols + j
            if j + 1 < cols:
                edges.append((v, v + 1))
            if i + 1 < rows:
                edges.append((v, v + cols))
    return edges


def peps_grid(rows: int, cols: int, n: int, r: int, fill: Fill = Fill()) -> TensorHypernetwork:
    """Open-boundary grid: a dangling edge per site and a bond per grid edge"""
    _check_positive(rows=rows, cols=cols, n=n, r=r)
    sites = rows * cols
    bonds = _grid_edges(rows, cols)
    hypergraph = Hypergraph(sites, [(v,) for v in range(sites)] + bonds)
    return _network(hypergraph, [n] * sites + [r] * len(bonds), fill)


def mps(d: int, n: int, r: int, fill: Fill = Fill()) -> TensorHypernetwork:
    """Open-boundary chain; end tensors are n x r, interior tensors n x r x r"""
    _check_positive(d=d, n=n, r=r)
    return peps_grid(1, d, n, r, fill)


def tucker(ns: Sequence[int], ms: Sequence[int], fill: Fill = Fill()) -> TensorHypernetwork:
    """Core tensor joined by bond i to matrix i, which carries dangling edge i"""
    ns, ms = list(ns), list(ms)
    if not ns or len(ns) != len(ms):
        raise DomainError(f"Tucker needs matching non-empty sizes, got {ns} and {ms}")
    _check_positive(**{f"n{i}": v for i, v in enumerate(ns)}, **{f"m{i}": v for i, v in enumerate(ms)})
    d = len(ns)
    edges = [(i + 1,) for i in range(d)] + [(0, i + 1) for i in range(d)]
    return _network(Hypergraph(d + 1, edges), ns + ms, fill)


def cp(ns: Sequence[int], r: int, fill: Fill = Fill()) -> TensorHypernetwork:
    """Factor matrices sharing one rank edge over all vertices"""
    ns = list(ns)
    if len(ns) < 2:
        raise DomainError(f"CP needs at least two factors, got {len(ns)}")
    _check_positive(r=r, **{f"n{i}": v for i, v in enumerate(ns)})
    d = len(ns)
    edges = [(i,) for i in range(d)] + [tuple(range(d))]
    return _network(Hypergraph(d, edges), ns + [r], fill)


def no_three_way(sizes: Sequence[int], fill: Fill = Fill()) -> GraphicalModel:
    """p_ijk proportional to A_ij B_ik C_jk"""
    sizes = list(sizes)
    if len(sizes) != 3:
        raise DomainError(f"No-three-way model has three variables, got {len(sizes)} sizes")
    _check_positive(**{f"n{i}": v for i, v in enumerate(sizes)})
    return _model(Hypergraph(3, [(0, 1), (0, 2), (1, 2)]), sizes, fill)


def ising_grid(rows: int, cols: int, sizes: Union[int, Sequence[int]] = 2, fill: Fill = Fill()) -> GraphicalModel:
    """Variables on grid sites, pairwise potentials on grid edges"""
    _check_positive(rows=rows, cols=cols)
    count = rows * cols
    sizes = [sizes] * count if isinstance(sizes, int) else list(sizes)
    if len(sizes) != count:
        raise DomainError(f"Expected {count} variable sizes, got {len(sizes)}")
    return _model(Hypergraph(count, _grid_edges(rows, cols)), sizes, fill)


def _mps_sites(psi: TensorHypernetwork) -> int:
    d = psi.hypergraph.vertex_count
    expected = [(v,) for v in range(d)] + [(v, v + 1) for v in range(d - 1)]
    if d < 1 or list(psi.hypergraph.edges) != expected:
        raise ShapeError("Expected an open-boundary MPS from mps()")
    return d


def mps_sandwich(psi: TensorHypernetwork, blocks: Sequence) -> TensorHypernetwork:
    """<psi| A |psi> as a closed three-row network; blocks[i][a][b] = <a|A_i|b>"""
    d = _mps_sites(psi)
    blocks = [np.asarray(block) for block in blocks]
    if len(blocks) != d:
        raise ShapeError(f"Expected {d} blocks, got {len(blocks)}")
    for i, block in enumerate(blocks):
        n = psi.sizes[i]
        if block.shape != (n, n):
            raise ShapeError(f"Block {i} has shape {block.shape}, site needs ({n}, {n})")

    field = COMPLEX if psi.field == COMPLEX or any(np.iscomplexobj(b) for b in blocks) else REAL
    ket = {i: 4 * i for i in range(d)}
    ket.update({d + i: 4 * i + 2 for i in range(d - 1)})
    bra = {i: 4 * i + 1 for i in range(d)}
    bra.update({d + i: 4 * i + 3 for i in range(d - 1)})

    tensors = [t.astype(field).relabel(ket) for t in psi.tensors]
    # block tensor is indexed (p, q) = (ket, bra), hence the transpose
    tensors += [LabeledTensor((4 * i, 4 * i + 1), block.T, field=field) for i, block in enumerate(blocks)]
    tensors += [t.astype(field).conj().relabel(bra) for t in psi.tensors]

    edges, sizes = [], []
    for i in range(d):
        n = psi.sizes[i]
        edges += [(i, d + i), (d + i, 2 * d + i)]
        sizes += [n, n]
        if i + 1 < d:
            r = psi.sizes[d + i]
            edges += [(i, i + 1), (2 * d + i, 2 * d + i + 1)]
            sizes += [r, r]
    return TensorHypernetwork(Hypergraph(3 * d, edges), sizes, tensors, field=field)


def bubbling_order(d: int) -> List[int]:
    """Left-to-right sandwich contraction: p, q of site 0, then top bond, ket, bottom bond, bra per site"""
    _check_positive(d=d)
    order = [0, 1]
    for i in range(1, d):
        order += [4 * (i - 1) + 2, 4 * i, 4 * (i - 1) + 3, 4 * i + 1]
    return order


def build(spec: ZooSpec) -> Union[GraphicalModel, TensorHypernetwork]:
    """Construct the family named by a validated ZooSpec"""
    if spec.fill == FillMode.RANDOM:
        fill = Fill.random(spec.seed, field=spec.field.value)
    elif spec.fill == FillMode.ONES:
        fill = Fill.ones(field=spec.field.value)
    else:
        raise DomainError("Data fill is only available through the library constructors")

    logger.info(f"Building {spec.family.value} with {spec.fill.value} fill")
    if spec.family == ZooFamily.MPS:
        return mps(spec.sites, spec.phys, spec.bond, fill)
    if spec.family == ZooFamily.PEPS:
        return peps_grid(spec.rows, spec.cols, spec.phys, spec.bond, fill)
    if spec.family == ZooFamily.TUCKER:
        return tucker(spec.sizes, spec.ranks, fill)
    if spec.family == ZooFamily.CP:
        return cp(spec.sizes, spec.bond, fill)
    if spec.family == ZooFamily.NO_THREE_WAY:
        return no_three_way(spec.sizes, fill)
    # explicit sizes must cover every site
    sizes = spec.sizes if "sizes" in spec.model_fields_set else spec.phys
    return ising_grid(spec.rows, spec.cols, sizes, fill)

from enum import Enum
from typing import List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config.settings import DEFAULT_FIELD, FORMAT_VERSION
from ..core.exceptions import FormatError
from ..core.hypergraph import Hypergraph
from ..core.model import GraphicalModel, TensorHypernetwork
from ..core.tensor import COMPLEX, LabeledTensor

Number = Union[float, List[float]]


class FieldKind(str, Enum):
    REAL = "real"
    COMPLEX = "complex"


class ModelKind(str, Enum):
    GM = "gm"
    TN = "tn"


class StepKind(str, Enum):
    SUM_EDGE = "sum_edge"
    MERGE = "merge"


class ZooFamily(str, Enum):
    MPS = "mps"
    TUCKER = "tucker"
    CP = "cp"
    NO_THREE_WAY = "no-three-way"
    ISING = "ising"
    PEPS = "peps"


class FillMode(str, Enum):
    ONES = "ones"
    RANDOM = "random"
    DATA = "data"


def _encode_values(array: np.ndarray) -> List[Number]:
    flat = np.asarray(array).reshape(-1)
    if np.iscomplexobj(flat):
        return [[float(z.real), float(z.imag)] for z in flat]
    return [float(x) for x in flat]


def _decode_values(values: List[Number], field: str) -> np.ndarray:
    if field == COMPLEX:
        decoded = []
        for value in values:
            if isinstance(value, list):
                if len(value) != 2:
                    raise FormatError(f"Complex entries are [re, im] pairs, got {value}")
                decoded.append(complex(value[0], value[1]))
            else:
                decoded.append(complex(value))
        return np.asarray(decoded, dtype=np.complex128)
    if any(isinstance(value, list) for value in values):
        raise FormatError("Real tensor data must be plain numbers")
    return np.asarray(values, dtype=np.float64)


class HypergraphSchema(BaseModel):
    vertices: int = Field(..., ge=0)
    edges: List[List[int]] = Field(default_factory=list)

    @classmethod
    def from_hypergraph(cls, hypergraph: Hypergraph) -> "HypergraphSchema":
        return cls(vertices=hypergraph.vertex_count, edges=[list(edge) for edge in hypergraph.edges])

    def to_hypergraph(self) -> Hypergraph:
        return Hypergraph(self.vertices, self.edges)


class TensorSchema(BaseModel):
    labels: List[int]
    sizes: List[int]
    data: List[Number]  # row-major over ascending labels; complex entries are [re, im]

    @field_validator("sizes")
    @classmethod
    def check_sizes(cls, value: List[int]) -> List[int]:
        if any(n < 1 for n in value):
            raise ValueError(f"Axis sizes must be positive, got {value}")
        return value

    @classmethod
    def from_tensor(cls, tensor: LabeledTensor) -> "TensorSchema":
        return cls(labels=list(tensor.labels), sizes=list(tensor.sizes), data=_encode_values(tensor.data))

    def to_tensor(self, field: str) -> LabeledTensor:
        if len(self.labels) != len(self.sizes):
            raise FormatError(f"{len(self.labels)} labels but {len(self.sizes)} sizes")
        return LabeledTensor.from_flat(self.labels, self.sizes, _decode_values(self.data, field), field=field)


class TensorDocument(TensorSchema):
    format: str = FORMAT_VERSION
    field: FieldKind = FieldKind.REAL

    @classmethod
    def from_tensor(cls, tensor: LabeledTensor) -> "TensorDocument":
        return cls(
            labels=list(tensor.labels),
            sizes=list(tensor.sizes),
            data=_encode_values(tensor.data),
            field=FieldKind(tensor.field),
        )

    def to_tensor(self, field: Optional[str] = None) -> LabeledTensor:
        return super().to_tensor(field or self.field.value)


class ModelSchema(BaseModel):
    """A graphical model ("gm") or a tensor hypernetwork ("tn")"""

    format: str = FORMAT_VERSION
    kind: ModelKind
    hypergraph: HypergraphSchema
    sizes: List[int]
    factors: List[TensorSchema]
    field: FieldKind = FieldKind(DEFAULT_FIELD)

    @field_validator("format")
    @classmethod
    def check_format(cls, value: str) -> str:
        if value != FORMAT_VERSION:
            raise ValueError(f"Unsupported format '{value}', expected '{FORMAT_VERSION}'")
        return value

    @classmethod
    def from_model(cls, model: Union[GraphicalModel, TensorHypernetwork]) -> "ModelSchema":
        factors = model.potentials if isinstance(model, GraphicalModel) else model.tensors
        return cls(
            kind=ModelKind.GM if isinstance(model, GraphicalModel) else ModelKind.TN,
            hypergraph=HypergraphSchema.from_hypergraph(model.hypergraph),
            sizes=list(model.sizes),
            factors=[TensorSchema.from_tensor(f) for f in factors],
            field=FieldKind(model.field),
        )

    def to_model(self) -> Union[GraphicalModel, TensorHypernetwork]:
        field = self.field.value
        factors = [f.to_tensor(field) for f in self.factors]
        hypergraph = self.hypergraph.to_hypergraph()
        if self.kind == ModelKind.GM:
            return GraphicalModel(hypergraph, self.sizes, factors, field=field)
        return TensorHypernetwork(hypergraph, self.sizes, factors, field=field)


class CostReport(BaseModel):
    """Scalar operation counts of one plan execution"""

    mults: int = Field(0, ge=0)
    adds: int = Field(0, ge=0)
    peak_entries: int = Field(0, ge=0)


class PlanStep(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: StepKind
    edge: Optional[int] = None
    tensors: Optional[List[int]] = None

    @model_validator(mode="after")
    def check_operands(self) -> "PlanStep":
        if self.kind == StepKind.SUM_EDGE and self.edge is None:
            raise ValueError("sum_edge steps need an edge")
        if self.kind == StepKind.MERGE and (self.tensors is None or len(self.tensors) != 2):
            raise ValueError("merge steps need exactly two tensor ids")
        return self

    @classmethod
    def sum_edge(cls, edge: int) -> "PlanStep":
        return cls(kind=StepKind.SUM_EDGE, edge=edge)

    @classmethod
    def merge(cls, a: int, b: int) -> "PlanStep":
        return cls(kind=StepKind.MERGE, tensors=[a, b])


class TreeEdgeSchema(BaseModel):
    a: int
    b: int
    separator: List[int]


class MessageRecord(BaseModel):
    """Operation counts of one junction tree message"""

    source: int
    target: int
    summed: List[int]
    multiplications: int
    divisions: int
    additions: int


class JunctionTreeDiagnostics(BaseModel):
    elimination_order: List[int]
    fill_edges: List[List[int]]
    cliques: List[List[int]]
    root: int
    tree_edges: List[TreeEdgeSchema]
    messages: List[MessageRecord] = Field(default_factory=list)


class ContractionPlan(BaseModel):
    """Ordered steps; tensor ids are vertex ids, each step's result takes the next free id"""

    format: str = FORMAT_VERSION
    steps: List[PlanStep] = Field(default_factory=list)
    cost: Optional[CostReport] = None
    diagnostics: Optional[JunctionTreeDiagnostics] = None

    def edges(self) -> List[int]:
        return [step.edge for step in self.steps if step.kind == StepKind.SUM_EDGE]


class HypergraphReport(BaseModel):
    vertices: int
    edges: int
    degrees: List[int]
    edge_sizes: List[int]
    two_uniform: bool
    two_regular: bool
    at_most_two_regular: bool
    berge_acyclic: bool
    helly: Optional[bool] = None
    euler_characteristic: Optional[int] = None  # None when the face cap is hit
    components: int


class StructureReport(BaseModel):
    format: str = FORMAT_VERSION
    kind: ModelKind
    hypergraph: HypergraphReport
    dual: HypergraphReport
    treewidth_estimate: int


class BlocksDocument(BaseModel):
    """Per-site operator blocks; blocks[i][a][b] is <a|A_i|b>"""

    format: str = FORMAT_VERSION
    field: FieldKind = FieldKind.REAL
    blocks: List[List[List[Number]]]

    def to_arrays(self) -> List[np.ndarray]:
        arrays = []
        for i, block in enumerate(self.blocks):
            rows = {len(row) for row in block}
            if len(rows) > 1:
                raise FormatError(f"Block {i} has ragged rows")
            flat = [value for row in block for value in row]
            arrays.append(_decode_values(flat, self.field.value).reshape(len(block), rows.pop() if rows else 0))
        return arrays

    @classmethod
    def from_arrays(cls, arrays: List[np.ndarray]) -> "BlocksDocument":
        field = FieldKind.COMPLEX if any(np.iscomplexobj(a) for a in arrays) else FieldKind.REAL
        blocks = []
        for array in arrays:
            array = np.asarray(array, dtype=np.complex128 if field == FieldKind.COMPLEX else np.float64)
            blocks.append([_encode_values(row) for row in array])
        return cls(field=field, blocks=blocks)


class ZooSpec(BaseModel):
    family: ZooFamily
    sites: int = Field(4, ge=1)
    phys: int = Field(2, ge=1)
    bond: int = Field(2, ge=1)
    rows: int = Field(2, ge=1)
    cols: int = Field(2, ge=1)
    sizes: List[int] = Field(default_factory=lambda: [2, 2, 2])
    ranks: List[int] = Field(default_factory=lambda: [2, 2, 2])
    fill: FillMode = FillMode.ONES
    seed: Optional[int] = None
    field: FieldKind = FieldKind(DEFAULT_FIELD)

    @field_validator("sizes", "ranks")
    @classmethod
    def check_positive(cls, value: List[int]) -> List[int]:
        if any(n < 1 for n in value):
            raise ValueError(f"All sizes must be at least 1, got {value}")
        return value

    @model_validator(mode="after")
    def check_seed(self) -> "ZooSpec":
        if self.fill == FillMode.RANDOM and self.seed is None:
            raise ValueError("Random fill needs a seed")
        return self


class RandomInstanceSpec(BaseModel):
    max_variables: int = Field(6, ge=1)
    max_edges: int = Field(6, ge=1)
    max_size: int = Field(3, ge=1)
    field: FieldKind = FieldKind.REAL
    seed: int = 0


class EntropyReport(BaseModel):
    format: str = FORMAT_VERSION
    variables: List[int]
    entropy: float  # nats

"""Dense labeled tensors.

A LabeledTensor is a numpy array whose axes carry integer labels. Labels are
kept in ascending order, so two tensors over the same labels always share an
axis layout and equality is exact.
"""

import logging
from typing import Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import xlogy

from ..config.settings import ENTROPY_TOLERANCE
from .exceptions import (
    DegenerateDistributionError,
    DomainError,
    FieldMismatchError,
    LabelError,
    NumericalError,
    ShapeError,
    SliceIndexError,
)

logger = logging.getLogger(__name__)

REAL = "real"
COMPLEX = "complex"

_DTYPES = {REAL: np.float64, COMPLEX: np.complex128}

Scalar = Union[float, complex]


def dtype_for(field: str) -> np.dtype:
    """Map a field name to its numpy dtype"""
    try:
        return np.dtype(_DTYPES[field])
    except KeyError:
        raise DomainError(f"Unknown field '{field}', expected '{REAL}' or '{COMPLEX}'")


class LabeledTensor:
    """Immutable dense tensor with one integer label per axis"""

    __slots__ = ("labels", "sizes", "data")

    def __init__(self, labels: Sequence[int], data, field: Optional[str] = None):
        labels = tuple(int(label) for label in labels)
        array = np.asarray(data)
        if field is None:
            field = COMPLEX if np.iscomplexobj(array) else REAL
        elif field == REAL and np.iscomplexobj(array):
            if np.any(np.imag(array) != 0):
                raise FieldMismatchError("Complex data given for a real tensor")
            array = np.real(array)
        array = np.array(array, dtype=dtype_for(field))

        if array.ndim != len(labels):
            raise ShapeError(f"{len(labels)} labels given for an array with {array.ndim} axes")
        if len(set(labels)) != len(labels):
            raise LabelError(f"Duplicate labels in {labels}")
        if any(size < 1 for size in array.shape):
            raise ShapeError(f"Axis sizes must be positive, got {array.shape}")

        order = sorted(range(len(labels)), key=labels.__getitem__)
        if order != list(range(len(labels))):
            array = np.ascontiguousarray(array.transpose(order))
        array.flags.writeable = False

        self.labels: Tuple[int, ...] = tuple(labels[i] for i in order)
        self.sizes: Tuple[int, ...] = tuple(array.shape)
        self.data: np.ndarray = array

    @classmethod
    def from_flat(
        cls,
        labels: Sequence[int],
        sizes: Sequence[int],
        values: Iterable,
        field: Optional[str] = None,
    ) -> "LabeledTensor":
        """Build from a row-major flat sequence laid out over `labels` as given"""
        flat = np.asarray(list(values))
        expected = int(np.prod(sizes, dtype=np.int64)) if len(sizes) else 1
        if flat.size != expected:
            raise ShapeError(f"Expected {expected} entries for sizes {tuple(sizes)}, got {flat.size}")
        return cls(labels, flat.reshape(tuple(sizes)), field=field)

    @classmethod
    def ones(cls, labels: Sequence[int], sizes: Sequence[int], field: str = REAL) -> "LabeledTensor":
        return cls(labels, np.ones(tuple(sizes)), field=field)

    @classmethod
    def scalar(cls, value: Scalar, field: Optional[str] = None) -> "LabeledTensor":
        return cls((), np.asarray(value), field=field)

    @property
    def field(self) -> str:
        return COMPLEX if np.iscomplexobj(self.data) else REAL

    @property
    def size(self) -> int:
        return int(self.data.size)

    def axis(self, label: int) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LabelError(f"Label {label} not in tensor labels {self.labels}")

    def size_of(self, label: int) -> int:
        return self.sizes[self.axis(label)]

    def total(self) -> Scalar:
        """Sum of all entries"""
        return self.data.sum().item()

    def item(self) -> Scalar:
        if self.labels:
            raise ShapeError(f"Tensor over {self.labels} is not a scalar")
        return self.data.item()

    def conj(self) -> "LabeledTensor":
        return LabeledTensor(self.labels, np.conj(self.data), field=self.field)

    def relabel(self, mapping: Mapping[int, int]) -> "LabeledTensor":
        """Rename labels; labels missing from `mapping` keep their id"""
        return LabeledTensor([mapping.get(label, label) for label in self.labels], self.data, field=self.field)

    def astype(self, field: str) -> "LabeledTensor":
        return LabeledTensor(self.labels, self.data, field=field)

    def array_over(self, labels: Sequence[int]) -> np.ndarray:
        """The data with axes permuted into the order of `labels`"""
        if sorted(labels) != list(self.labels):
            raise LabelError(f"Labels {tuple(labels)} do not match {self.labels}")
        return self.data.transpose([self.axis(label) for label in labels])

    def allclose(self, other: "LabeledTensor", rtol: float = 1e-10, atol: float = 0.0) -> bool:
        return (
            self.labels == other.labels
            and self.sizes == other.sizes
            and bool(np.allclose(self.data, other.data, rtol=rtol, atol=atol))
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledTensor):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.data.dtype == other.data.dtype
            and bool(np.array_equal(self.data, other.data))
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"LabeledTensor(labels={self.labels}, sizes={self.sizes}, field={self.field})"


def _check_fields(*tensors: LabeledTensor) -> None:
    fields = {tensor.field for tensor in tensors}
    if len(fields) > 1:
        raise FieldMismatchError(f"Cannot combine tensors over fields {sorted(fields)}")


def multiply(a: LabeledTensor, b: LabeledTensor) -> LabeledTensor:
    """Aligned product: shared labels are matched, the rest form an outer product"""
    _check_fields(a, b)
    for label in set(a.labels) & set(b.labels):
        if a.size_of(label) != b.size_of(label):
            raise ShapeError(
                f"Label {label} has size {a.size_of(label)} in one factor and {b.size_of(label)} in the other"
            )
    out_labels = sorted(set(a.labels) | set(b.labels))
    position = {label: i for i, label in enumerate(out_labels)}
    data = np.einsum(
        a.data,
        [position[label] for label in a.labels],
        b.data,
        [position[label] for label in b.labels],
        list(range(len(out_labels))),
    )
    return LabeledTensor(out_labels, data, field=a.field)


def multiply_all(tensors: Iterable[LabeledTensor], field: str = REAL) -> LabeledTensor:
    """Left-to-right product of a sequence; the empty product is the scalar 1"""
    result = LabeledTensor.scalar(1.0, field=field)
    for tensor in tensors:
        result = multiply(result, tensor)
    return result


def sum_out(t: LabeledTensor, label: int) -> LabeledTensor:
    """Remove one axis by summing over it"""
    axis = t.axis(label)
    labels = t.labels[:axis] + t.labels[axis + 1:]
    return LabeledTensor(labels, t.data.sum(axis=axis), field=t.field)


def sum_labels(t: LabeledTensor, labels: Iterable[int]) -> LabeledTensor:
    """Sum out several labels at once"""
    labels = set(labels)
    axes = tuple(t.axis(label) for label in sorted(labels))
    if not axes:
        return t
    kept = [label for label in t.labels if label not in labels]
    return LabeledTensor(kept, t.data.sum(axis=axes), field=t.field)


def keep_labels(t: LabeledTensor, labels: Iterable[int]) -> LabeledTensor:
    """Sum out everything except `labels`"""
    labels = set(labels)
    return sum_labels(t, [label for label in t.labels if label not in labels])


def validate_keep(keep: Sequence[int], size: int) -> list:
    keep = [int(i) for i in keep]
    if not keep:
        raise DomainError("Slice must keep at least one index")
    for previous, current in zip(keep, keep[1:]):
        if current <= previous:
            raise SliceIndexError(f"Slice indices must be strictly increasing, got {keep}")
    if keep[0] < 0 or keep[-1] >= size:
        raise SliceIndexError(f"Slice indices {keep} out of range for an axis of size {size}")
    return keep


def slice_tensor(t: LabeledTensor, label: int, keep: Sequence[int]) -> LabeledTensor:
    """Restrict one axis to the indices in `keep`; the label stays"""
    axis = t.axis(label)
    keep = validate_keep(keep, t.sizes[axis])
    return LabeledTensor(t.labels, np.take(t.data, keep, axis=axis), field=t.field)


def divide(a: LabeledTensor, b: LabeledTensor) -> LabeledTensor:
    """Entrywise a / b over identical labels, with 0/0 taken as 0"""
    _check_fields(a, b)
    if a.labels != b.labels or a.sizes != b.sizes:
        raise LabelError(f"Cannot divide tensor over {a.labels} by tensor over {b.labels}")
    zero = b.data == 0
    if np.any(zero & (a.data != 0)):
        raise NumericalError(f"Nonzero divided by zero on labels {a.labels}")
    out = np.zeros_like(a.data)
    np.divide(a.data, b.data, out=out, where=~zero)
    return LabeledTensor(a.labels, out, field=a.field)


def normalize(t: LabeledTensor, probability: bool = True) -> Tuple[LabeledTensor, Scalar]:
    """Divide by the total sum Z and return (tensor, Z).

    With `probability` set the tensor must be real and non-negative.
    """
    if probability:
        if t.field != REAL:
            raise DomainError("Probability normalization needs a real tensor")
        if np.any(t.data < 0):
            raise DomainError("Probability normalization found negative entries")
    z = t.total()
    if z == 0:
        raise DegenerateDistributionError(f"Total sum of tensor over {t.labels} is zero")
    return LabeledTensor(t.labels, t.data / z, field=t.field), z


def shannon_entropy(t: LabeledTensor) -> float:
    """-sum t log t in nats, with 0 log 0 = 0"""
    if t.field != REAL:
        raise DomainError("Entropy is defined for real tensors only")
    if np.any(t.data < 0):
        raise DomainError("Entropy input has negative entries")
    total = t.total()
    if abs(total - 1.0) > ENTROPY_TOLERANCE:
        raise DomainError(f"Entropy input sums to {total!r}, not 1")
    return float(-xlogy(t.data, t.data).sum())


def entanglement_entropy(t: LabeledTensor) -> float:
    # -tr(T log T) expands to the same elementwise sum
    return shannon_entropy(t)

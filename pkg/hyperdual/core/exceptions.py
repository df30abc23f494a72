class HyperdualError(Exception):
    """Base class for all library errors. `exit_code` is what the CLI returns."""

    exit_code = 1


class DomainError(HyperdualError):
    """Values outside the domain an operation is defined on"""


class DegenerateDistributionError(DomainError):
    """Total mass Z is zero, so nothing can be normalized"""


class FieldMismatchError(DomainError):
    """Real and complex tensors mixed in one operation"""


class SizeError(HyperdualError):
    """An enumeration or output would exceed a configured cap"""


class ShapeError(HyperdualError):
    """Axis sizes disagree"""


class LabelError(HyperdualError):
    """A label is missing, duplicated or unknown"""


class SliceIndexError(HyperdualError):
    """A slice index is out of range or out of order"""


class NumericalError(HyperdualError):
    """Nonzero divided by zero during message passing"""


class PlanError(HyperdualError):
    """A contraction plan does not fit the network it is run on"""


class ConstructionError(HyperdualError):
    """A model or tree could not be assembled from its parts"""


class PreconditionError(HyperdualError):
    """An input violates a structural precondition (e.g. not chordal)"""


class InternalError(HyperdualError):
    """A post-condition check failed; indicates a bug or a bad precondition upstream"""


class FormatError(HyperdualError):
    """Malformed JSON document"""

    exit_code = 2

import json
import logging
import sys
from pathlib import Path
from typing import Callable, List, Type, TypeVar, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from ..core.exceptions import FormatError, HyperdualError
from ..core.model import GraphicalModel, TensorHypernetwork
from ..core.tensor import LabeledTensor
from ..models.schemas import BlocksDocument, ContractionPlan, ModelSchema, TensorDocument

logger = logging.getLogger(__name__)

STDIN = "-"

Schema = TypeVar("Schema", bound=BaseModel)
T = TypeVar("T")


def read_text(path: Union[str, Path]) -> str:
    """File contents, or standard input for "-"; read failures are format errors"""
    try:
        if str(path) == STDIN:
            return sys.stdin.read()
        return Path(path).read_text()
    except OSError as e:
        raise FormatError(f"Cannot read {path}: {e}")


def parse(schema: Type[Schema], text: str, source: str = "<input>") -> Schema:
    try:
        return schema.model_validate(json.loads(text))
    except json.JSONDecodeError as e:
        raise FormatError(f"{source} is not valid JSON: {e}")
    except ValidationError as e:
        raise FormatError(f"{source} does not match the {schema.__name__} schema: {e}")


def convert(build: Callable[[], T], source: str = "<input>") -> T:
    """Run a document-to-domain conversion; a well-formed but inconsistent document is a format error"""
    try:
        return build()
    except FormatError:
        raise
    except HyperdualError as e:
        raise FormatError(f"{source} is inconsistent: {type(e).__name__}: {e}")


def dumps(document: BaseModel) -> str:
    # shortest round-trip float repr keeps reruns byte-identical
    return json.dumps(document.model_dump(mode="json", exclude_none=True), indent=2) + "\n"


def write_text(path: Union[str, Path], text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as e:
        raise FormatError(f"Cannot write {path}: {e}")
    logger.info(f"Wrote {path}")


class ModelRepository:
    """Graphical models and tensor hypernetworks as JSON documents"""

    @staticmethod
    def loads(text: str, source: str = "<input>") -> Union[GraphicalModel, TensorHypernetwork]:
        document = parse(ModelSchema, text, source)
        return convert(document.to_model, source)

    @staticmethod
    def load(path: Union[str, Path]) -> Union[GraphicalModel, TensorHypernetwork]:
        model = ModelRepository.loads(read_text(path), str(path))
        logger.info(f"Loaded {type(model).__name__} from {path}")
        return model

    @staticmethod
    def dumps(model: Union[GraphicalModel, TensorHypernetwork]) -> str:
        return dumps(ModelSchema.from_model(model))

    @staticmethod
    def save(model: Union[GraphicalModel, TensorHypernetwork], path: Union[str, Path]) -> None:
        write_text(path, ModelRepository.dumps(model))


class TensorRepository:
    """Standalone tensors (states, marginals, scalars)"""

    @staticmethod
    def loads(text: str, source: str = "<input>") -> LabeledTensor:
        document = parse(TensorDocument, text, source)
        return convert(document.to_tensor, source)

    @staticmethod
    def load(path: Union[str, Path]) -> LabeledTensor:
        return TensorRepository.loads(read_text(path), str(path))

    @staticmethod
    def dumps(tensor: LabeledTensor) -> str:
        return dumps(TensorDocument.from_tensor(tensor))


class PlanRepository:
    """Contraction plans with optional cost and diagnostics"""

    @staticmethod
    def loads(text: str, source: str = "<input>") -> ContractionPlan:
        return parse(ContractionPlan, text, source)

    @staticmethod
    def load(path: Union[str, Path]) -> ContractionPlan:
        return PlanRepository.loads(read_text(path), str(path))

    @staticmethod
    def dumps(plan: ContractionPlan) -> str:
        return dumps(plan)

    @staticmethod
    def save(plan: ContractionPlan, path: Union[str, Path]) -> None:
        write_text(path, PlanRepository.dumps(plan))


class BlocksRepository:
    """Per-site operator blocks for expectation values"""

    @staticmethod
    def loads(text: str, source: str = "<input>") -> List[np.ndarray]:
        document = parse(BlocksDocument, text, source)
        return convert(document.to_arrays, source)

    @staticmethod
    def load(path: Union[str, Path]) -> List[np.ndarray]:
        return BlocksRepository.loads(read_text(path), str(path))

    @staticmethod
    def dumps(blocks: List[np.ndarray]) -> str:
        return dumps(BlocksDocument.from_arrays(blocks))

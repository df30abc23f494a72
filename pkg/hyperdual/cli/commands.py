"""One function per CLI command. Each returns the JSON text for standard output."""

import logging
from typing import List, Optional, Sequence

from pydantic import ValidationError

from ..analysis.contraction import contract, execute_plan, expectation_value, plan_from_junction_tree
from ..analysis.junction_tree import marginal_set
from ..analysis.structure_analyzer import StructureAnalyzer
from ..config.settings import DEFAULT_SEED
from ..core.exceptions import DomainError
from ..core.model import GraphicalModel, TensorHypernetwork, condition, condition_tn, gm_to_tn, tn_to_gm
from ..core.tensor import LabeledTensor, shannon_entropy
from ..models.schemas import EntropyReport, ZooFamily, ZooSpec
from ..storage.repositories import (
    BlocksRepository,
    ModelRepository,
    PlanRepository,
    TensorRepository,
    dumps,
    write_text,
)
from ..zoo.networks import build

logger = logging.getLogger(__name__)


def _as_gm(model) -> GraphicalModel:
    return model if isinstance(model, GraphicalModel) else tn_to_gm(model)


def _as_tn(model) -> TensorHypernetwork:
    return model if isinstance(model, TensorHypernetwork) else gm_to_tn(model)


def cmd_zoo(family: str, **params) -> str:
    """Generate a standard network or model"""
    families = [f.value for f in ZooFamily]
    if family not in families:
        raise DomainError(f"Unknown family '{family}', expected one of {families}")
    params = {key: value for key, value in params.items() if value is not None}
    if params.get("fill") == "random":
        params.setdefault("seed", DEFAULT_SEED)
    try:
        spec = ZooSpec(family=family, **params)
    except ValidationError as e:
        raise DomainError(f"Invalid parameters for {family}: {e}")
    return ModelRepository.dumps(build(spec))


def cmd_dualize(path: str) -> str:
    """Swap a graphical model and its dual network"""
    model = ModelRepository.load(path)
    dual = gm_to_tn(model) if isinstance(model, GraphicalModel) else tn_to_gm(model)
    return ModelRepository.dumps(dual)


def cmd_contract(path: str, plan_path: Optional[str] = None) -> str:
    """Contract a network (a graphical model is contracted as its dual)"""
    tn = _as_tn(ModelRepository.load(path))
    state = contract(tn)
    if plan_path:
        plan, report = plan_from_junction_tree(tn, with_diagnostics=True)
        _, cost = execute_plan(tn, plan)
        PlanRepository.save(plan.model_copy(update={"cost": cost, "diagnostics": report}), plan_path)
    return TensorRepository.dumps(state)


def cmd_marginalize(path: str, variables: Sequence[int], normalized: bool = False) -> str:
    gm = _as_gm(ModelRepository.load(path))
    return TensorRepository.dumps(marginal_set(gm, variables, normalized=normalized))


def cmd_condition(path: str, variable: int, keep: Sequence[int]) -> str:
    model = ModelRepository.load(path)
    if isinstance(model, GraphicalModel):
        return ModelRepository.dumps(condition(model, variable, keep))
    return ModelRepository.dumps(condition_tn(model, variable, keep))


def cmd_entropy(path: str, variables: Sequence[int]) -> str:
    """Shannon entropy (nats) of the normalized marginal over `variables`"""
    gm = _as_gm(ModelRepository.load(path))
    entropy = shannon_entropy(marginal_set(gm, variables, normalized=True))
    return dumps(EntropyReport(variables=sorted(set(variables)), entropy=entropy))


def cmd_analyze(path: str) -> str:
    return dumps(StructureAnalyzer.analyze(ModelRepository.load(path)))


def cmd_plan(path: str, order: Optional[List[int]] = None) -> str:
    """Junction-tree contraction plan with its cost report and tree diagnostics"""
    tn = _as_tn(ModelRepository.load(path))
    plan, report = plan_from_junction_tree(tn, order=order or None, with_diagnostics=True)
    _, cost = execute_plan(tn, plan)
    logger.info(f"Plan has {len(plan.steps)} steps, {cost.mults} multiplications, {cost.adds} additions")
    return PlanRepository.dumps(plan.model_copy(update={"cost": cost, "diagnostics": report}))


def cmd_execute(path: str, plan_path: str) -> str:
    """Run a saved plan against a network"""
    tn = _as_tn(ModelRepository.load(path))
    plan = PlanRepository.load(plan_path)
    state, cost = execute_plan(tn, plan)
    logger.info(f"Executed plan: {cost.mults} multiplications, {cost.adds} additions, peak {cost.peak_entries} entries")
    return TensorRepository.dumps(state)


def cmd_expect(psi_path: str, blocks_path: str) -> str:
    """<psi| A |psi> for an MPS and per-site blocks"""
    model = ModelRepository.load(psi_path)
    if not isinstance(model, TensorHypernetwork):
        raise DomainError("Expectation values need an MPS network, got a graphical model")
    value = expectation_value(model, BlocksRepository.load(blocks_path))
    return TensorRepository.dumps(LabeledTensor.scalar(value))


def save_or_return(text: str, out: Optional[str]) -> Optional[str]:
    if out and out != "-":
        write_text(out, text)
        return None
    return text

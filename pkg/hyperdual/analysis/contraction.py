"""Tensor network contraction through the dual graphical model.

The network's dangling edges become one extra all-ones clique of the dual
model; after a collect toward that clique its potential is the network state.
Plans replay the same elimination as explicit edge-by-edge steps with an
exact operation count.
"""

import logging
import math
import time
from typing import Dict, List, Optional, Sequence, Tuple

from ..config.settings import OUTPUT_CAP
from ..core.exceptions import LabelError, PlanError, SizeError
from ..core.hypergraph import Hypergraph
from ..core.model import GraphicalModel, TensorHypernetwork, tn_to_gm
from ..core.tensor import LabeledTensor, keep_labels, multiply, multiply_all, sum_out
from ..models.schemas import ContractionPlan, CostReport, MessageRecord, PlanStep, StepKind
from ..zoo.networks import mps_sandwich
from .junction_tree import (
    collect,
    collect_schedule,
    compile_junction_tree,
    diagnostics,
    terminal_node,
    total_sum,
)

logger = logging.getLogger(__name__)


def _check_output(tn: TensorHypernetwork, output_cap: int) -> Tuple[int, ...]:
    dangling = tn.dangling_edges()
    entries = math.prod(tn.sizes[e] for e in dangling)
    if entries > output_cap:
        raise SizeError(f"Contracted state has {entries} entries, above the output cap of {output_cap}")
    return dangling


def _with_dangling_clique(tn: TensorHypernetwork, dangling: Tuple[int, ...]) -> GraphicalModel:
    gm = tn_to_gm(tn)
    ones = LabeledTensor.ones(dangling, [tn.sizes[e] for e in dangling], field=tn.field)
    hypergraph = Hypergraph(gm.variable_count, gm.hypergraph.edges + (dangling,))
    return GraphicalModel(hypergraph, gm.sizes, gm.potentials + (ones,), field=gm.field)


def contract(tn: TensorHypernetwork, output_cap: int = OUTPUT_CAP) -> LabeledTensor:
    """The network state: every edge with two or more vertices summed, dangling edges kept"""
    dangling = _check_output(tn, output_cap)
    logger.info(f"Contracting network with {tn.hypergraph.vertex_count} tensors and {len(dangling)} dangling edges")
    start_time = time.time()

    try:
        if not dangling:
            result = LabeledTensor.scalar(total_sum(tn_to_gm(tn)), field=tn.field)
        else:
            tree = compile_junction_tree(_with_dangling_clique(tn, dangling)).tree
            node = tree.node_containing(dangling)
            tree = collect(tree, node)
            result = keep_labels(tree.potentials[node], dangling)
    except Exception as e:
        logger.error(f"Error during contraction: {e}")
        raise

    logger.info(f"Contraction completed in {time.time() - start_time:.2f} seconds")
    return result


def plan_from_order(tn: TensorHypernetwork, order: Sequence[int]) -> ContractionPlan:
    """Sum the given edges in order; dangling edges are never summed"""
    dangling = set(tn.dangling_edges())
    steps = []
    for e in order:
        if not 0 <= e < tn.hypergraph.edge_count:
            raise LabelError(f"Unknown edge {e}")
        if e not in dangling:
            steps.append(PlanStep.sum_edge(int(e)))
    return ContractionPlan(steps=steps)


def plan_from_junction_tree(
    tn: TensorHypernetwork,
    order: Optional[Sequence[int]] = None,
    with_diagnostics: bool = False,
):
    """Edges in the order the forward sweep sums their dual variables.

    Each message contributes its C1 minus S variables, by elimination rank; the
    terminal node's leftover bound variables come last. With `with_diagnostics`
    the junction tree diagnostics, with message counts from an actual
    collect, are returned too.
    """
    dangling = tn.dangling_edges()
    compilation = compile_junction_tree(tn_to_gm(tn), extra_cliques=[dangling] if dangling else [], order=order)
    tree = compilation.tree
    terminal = tree.node_containing(dangling) if dangling else terminal_node(tree)
    rank = {v: i for i, v in enumerate(compilation.order)}

    seen = set(dangling)
    edges: List[int] = []
    for source, target in collect_schedule(tree, terminal):
        separator = tree.edges[tree.edge_index(source, target)].separator
        summed = sorted(set(tree.cliques[source]) - set(separator) - seen, key=rank.__getitem__)
        edges += summed
        seen.update(summed)
    edges += sorted(set(tree.cliques[terminal]) - seen, key=rank.__getitem__)

    plan = ContractionPlan(steps=[PlanStep.sum_edge(int(e)) for e in edges])
    if with_diagnostics:
        trace: List[MessageRecord] = []
        collect(tree, terminal, trace)
        return plan, diagnostics(compilation, trace)
    return plan


def execute_plan(tn: TensorHypernetwork, plan: ContractionPlan) -> Tuple[LabeledTensor, CostReport]:
    """Run a plan step by step, counting scalar operations.

    A sum step multiplies every live tensor carrying the edge in one fused
    product over the union L of their labels, then sums the edge out:
    (k - 1) * |L| multiplications and |L without e| * (n_e - 1) additions.
    A merge multiplies two live tensors: |union| multiplications.
    An edge with no vertex contributes its size as a factor.
    """
    logger.info(f"Executing plan with {len(plan.steps)} steps")
    start_time = time.time()

    live: Dict[int, LabeledTensor] = dict(enumerate(tn.tensors))
    next_id = len(live)
    dangling = set(tn.dangling_edges())
    free = set(tn.free_edges())
    summed = set()
    cost = CostReport(peak_entries=sum(t.size for t in live.values()))

    def union_size(tensors: Sequence[LabeledTensor]) -> int:
        sizes = {}
        for t in tensors:
            sizes.update(zip(t.labels, t.sizes))
        return math.prod(sizes.values())

    for index, step in enumerate(plan.steps):
        if step.kind == StepKind.SUM_EDGE:
            e = step.edge
            if e is None or not 0 <= e < tn.hypergraph.edge_count:
                raise PlanError(f"Step {index} names absent edge {e}")
            if e in dangling:
                raise PlanError(f"Step {index} sums dangling edge {e}")
            if e in summed:
                raise PlanError(f"Step {index} sums edge {e} a second time")
            summed.add(e)
            if e in free:
                operands, result = [], LabeledTensor.scalar(float(tn.sizes[e]), field=tn.field)
            else:
                operands = [tid for tid, t in live.items() if e in t.labels]
                tensors = [live[tid] for tid in operands]
                product = multiply_all(tensors, field=tn.field) if len(tensors) > 1 else tensors[0]
                full = union_size(tensors)
                cost.mults += (len(tensors) - 1) * full
                cost.adds += (full // tn.sizes[e]) * (tn.sizes[e] - 1)
                others = sum(t.size for tid, t in live.items() if tid not in operands)
                cost.peak_entries = max(cost.peak_entries, others + full)
                result = sum_out(product, e)
        else:
            a, b = step.tensors or (None, None)
            if a not in live or b not in live or a == b:
                raise PlanError(f"Step {index} merges unavailable tensors {step.tensors}")
            operands = [a, b]
            result = multiply(live[a], live[b])
            cost.mults += result.size
        for tid in operands:
            del live[tid]
        live[next_id] = result
        next_id += 1
        cost.peak_entries = max(cost.peak_entries, sum(t.size for t in live.values()))

    leftover = sorted(set(tn.bound_edges()) - summed)
    if leftover:
        raise PlanError(f"Plan leaves bound edges {leftover} unsummed")

    remaining = [live[tid] for tid in sorted(live)]
    result = remaining[0] if remaining else LabeledTensor.scalar(1.0, field=tn.field)
    for t in remaining[1:]:
        result = multiply(result, t)
        cost.mults += result.size
    for e in sorted(free - summed):
        result = LabeledTensor(result.labels, result.data * tn.sizes[e], field=tn.field)
        cost.mults += result.size

    logger.info(f"Plan execution completed in {time.time() - start_time:.2f} seconds")
    return result, cost


def expectation_value(psi: TensorHypernetwork, blocks: Sequence):
    """<psi| A |psi> for a block-diagonal operator, via a single sweep over the sandwich"""
    sandwich = mps_sandwich(psi, blocks)
    return total_sum(tn_to_gm(sandwich))

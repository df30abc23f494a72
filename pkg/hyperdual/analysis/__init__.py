from .contraction import (
    ContractionPlan,
    CostReport,
    PlanStep,
    contract,
    execute_plan,
    expectation_value,
    plan_from_junction_tree,
    plan_from_order,
)
from .junction_tree import (
    JunctionTree,
    assign_potentials,
    build_junction_tree,
    calibrate,
    collect,
    compile_junction_tree,
    hyperedge_marginals,
    marginal,
    marginal_set,
    maximal_cliques_chordal,
    pass_message,
    total_sum,
    treewidth_estimate,
    triangulate,
)
from .structure_analyzer import StructureAnalyzer

import logging
import time
from typing import Union

from ..config.settings import FACE_CAP, HELLY_CLIQUE_CAP
from ..core.exceptions import SizeError
from ..core.hypergraph import Hypergraph
from ..core.model import GraphicalModel, TensorHypernetwork
from ..models.schemas import HypergraphReport, ModelKind, StructureReport
from .junction_tree import treewidth_estimate

logger = logging.getLogger(__name__)


class StructureAnalyzer:
    """Structural report of a model's hypergraph and of its dual"""

    @staticmethod
    def analyze(
        model: Union[GraphicalModel, TensorHypernetwork],
        face_cap: int = FACE_CAP,
        clique_cap: int = HELLY_CLIQUE_CAP,
    ) -> StructureReport:
        logger.info(f"Starting structural analysis of {type(model).__name__}")
        start_time = time.time()

        try:
            hypergraph = model.hypergraph
            report = StructureReport(
                kind=ModelKind.GM if isinstance(model, GraphicalModel) else ModelKind.TN,
                hypergraph=StructureAnalyzer.describe(hypergraph, face_cap, clique_cap),
                dual=StructureAnalyzer.describe(hypergraph.dual(), face_cap, clique_cap),
                treewidth_estimate=treewidth_estimate(model),
            )
        except Exception as e:
            logger.error(f"Error during structural analysis: {e}")
            raise

        logger.info(f"Structural analysis completed in {time.time() - start_time:.2f} seconds")
        return report

    @staticmethod
    def describe(hypergraph: Hypergraph, face_cap: int = FACE_CAP, clique_cap: int = HELLY_CLIQUE_CAP) -> HypergraphReport:
        """Degrees, uniformity, regularity, acyclicity, Helly and the simplicial invariants"""
        complex_ = hypergraph.simplicial_complex()
        try:
            euler = complex_.euler_characteristic(face_cap)
        except SizeError as e:
            logger.warning(f"Euler characteristic skipped: {e}")
            euler = None
        try:
            helly = hypergraph.has_helly_property(clique_cap)
        except SizeError as e:
            logger.warning(f"Helly check skipped: {e}")
            helly = None

        return HypergraphReport(
            vertices=hypergraph.vertex_count,
            edges=hypergraph.edge_count,
            degrees=hypergraph.degrees(),
            edge_sizes=[len(edge) for edge in hypergraph.edges],
            two_uniform=hypergraph.is_k_uniform(2),
            two_regular=hypergraph.is_k_regular(2),
            at_most_two_regular=hypergraph.is_at_most_k_regular(2),
            berge_acyclic=hypergraph.is_berge_acyclic(),
            helly=helly,
            euler_characteristic=euler,
            components=complex_.connected_components(),
        )

"""Shipping-box dimension suites for single-product shipments.

Clusters a product catalog into K groups whose tight boxes minimize the
velocity-weighted shipment volume, via a divisive forward pass and an
agglomerative backward pass with snug reassignment and single-product-move
refinement between steps, then scores suites against shipment histories with
the air-in-box percentage.
"""

__version__ = "0.1.0"

from .baseline import BaselineResult, dp_1d
from .evaluation import (
    BoxUsage,
    EvalReport,
    ShipmentRecord,
    evaluate,
    k_sweep,
    weighted_air,
)
from .merge import best_merge_pair, combine_clusters
from .model import (
    AXES,
    Catalog,
    Cluster,
    Dims,
    Product,
    Solution,
    SolverConfig,
    cluster_volume,
    fits,
    tight_box,
    total_volume,
)
from .pipeline import (
    ForwardResult,
    KCurve,
    KPoint,
    LadderEntry,
    SolutionLadder,
    SolveResult,
    StageLog,
    StageRecord,
    backward_pass,
    elbow,
    forward_pass,
    solve,
    tune_scan,
    tune_start,
)
from .refine import (
    MoveCandidate,
    evaluate_moves,
    iterative_refinement,
    reassign_products,
)
from .split import SplitPlan, apply_best_split, best_split, best_split_for_axis
from .synth import PERIODS, PROFILES, gen_synthetic

__all__ = [
    "AXES",
    "BaselineResult",
    "BoxUsage",
    "Catalog",
    "Cluster",
    "Dims",
    "EvalReport",
    "ForwardResult",
    "KCurve",
    "KPoint",
    "LadderEntry",
    "MoveCandidate",
    "PERIODS",
    "PROFILES",
    "Product",
    "ShipmentRecord",
    "Solution",
    "SolutionLadder",
    "SolveResult",
    "SolverConfig",
    "SplitPlan",
    "StageLog",
    "StageRecord",
    "apply_best_split",
    "backward_pass",
    "best_merge_pair",
    "best_split",
    "best_split_for_axis",
    "cluster_volume",
    "combine_clusters",
    "dp_1d",
    "elbow",
    "evaluate",
    "evaluate_moves",
    "fits",
    "forward_pass",
    "gen_synthetic",
    "iterative_refinement",
    "k_sweep",
    "reassign_products",
    "solve",
    "tight_box",
    "total_volume",
    "tune_scan",
    "tune_start",
    "weighted_air",
]

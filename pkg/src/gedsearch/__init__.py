"""Graph edit distance lower bounds, exact computation and threshold
similarity search built on an arc-based integer programming formulation."""
from .bb import EditOp, IlpSolution, IlpStatus, NonIntegralSolution, extract_edit_path, ilp_solve
from .bounds import (BoundResult, InfeasibleFixings, UnsupportedCostModel, bm_bound, fori_lp_bound,
                     gap, ls_bound)
from .costs import (TAU_MULTIPLIERS, CostModel, aids_muta_costs, get_cost_model, protein_costs,
                    unit_costs)
from .graph import LabeledGraph, build_graph, random_graph, star_cycle_instance
from .io import load_dataset, parse_gxl, parse_native, read_graph, write_native, write_report
from .lp import LpSolution, LpStatus, check_dual_certificate, lp_solve
from .model import IlpModel, ThresholdedModel, add_threshold, build_bm_polytope, build_f1, build_fori
from .oracle import brute_force_bm, brute_force_ged
from .search import SearchConfig, SearchReport, filter_stage, fori_sim

__all__ = [
    "BoundResult", "CostModel", "EditOp", "IlpModel", "IlpSolution", "IlpStatus", "InfeasibleFixings",
    "LabeledGraph", "LpSolution", "LpStatus", "NonIntegralSolution", "SearchConfig", "SearchReport",
    "TAU_MULTIPLIERS", "ThresholdedModel", "UnsupportedCostModel", "add_threshold", "aids_muta_costs",
    "bm_bound", "brute_force_bm", "brute_force_ged", "build_bm_polytope", "build_f1", "build_fori",
    "build_graph", "check_dual_certificate", "extract_edit_path", "filter_stage", "fori_lp_bound",
    "fori_sim", "gap", "get_cost_model", "ilp_solve", "load_dataset", "lp_solve", "ls_bound",
    "parse_gxl", "parse_native", "protein_costs", "random_graph", "read_graph", "star_cycle_instance",
    "unit_costs", "write_native", "write_report",
]

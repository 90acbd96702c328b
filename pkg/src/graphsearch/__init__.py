"""Clearing contamination from directed networks with a small team of searchers."""
from .baselines import OracleResult, exact_search_time, splitting_strategy
from .decomposition import Decomposition, Section, decompose, is_minimal, is_valid
from .dynamics import (ClearanceTrace, LossReport, StrategyError, Validation, loss_max, loss_of,
                       lower_bound, simulate, validate)
from .generators import gen_ba_dag, gen_ordered_er
from .graph import (CycleError, DirectedGraph, EdgeListParseError, GraphError, NodeIdMap,
                    load_edge_list, topological_order, write_edge_list)
from .plank import DigraphResult, InternalError, construct_strategy, mdfs, plank, search_digraph
from .reduction import ReductionPlan, build_reduction, feedback_arc_set, fvs_from_fas, k_hubset
from .strategy import SearchStrategy, format_strategy, parse_strategy

__version__ = "0.1.0"

__all__ = [
    "ClearanceTrace", "CycleError", "Decomposition", "DigraphResult", "DirectedGraph",
    "EdgeListParseError", "GraphError", "InternalError", "LossReport", "NodeIdMap",
    "OracleResult", "ReductionPlan", "SearchStrategy", "Section", "StrategyError", "Validation",
    "build_reduction", "construct_strategy", "decompose", "exact_search_time",
    "feedback_arc_set", "format_strategy", "fvs_from_fas", "gen_ba_dag", "gen_ordered_er",
    "is_minimal", "is_valid", "k_hubset", "load_edge_list", "loss_max", "loss_of",
    "lower_bound", "mdfs", "parse_strategy", "plank", "search_digraph", "simulate",
    "splitting_strategy", "topological_order", "validate", "write_edge_list",
]

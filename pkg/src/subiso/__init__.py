"""Subgraph isomorphism solving with dynamic problem decomposition."""

from .graphs import (
    DirectedGraph,
    UndirectedView,
    connected_components,
    degree_stats,
    is_singly_connected,
)
from .model import (
    Propagation,
    SearchState,
    SipInstance,
    assign,
    checkpoint,
    init_state,
    propagate_alldiff_fc,
    propagate_mc_ac,
    propagate_mc_fc,
    restore,
)
from .decomposition import (
    DecompositionSplit,
    PseudoTree,
    ReducedGraph,
    build_pseudo_tree,
    build_reduced_graph,
    detect_decomposition,
    solve_split,
)
from .heuristics import HeuristicResult, cycle_heuristic, partition_heuristic, select_variable
from .search import (
    Model,
    ModelConfig,
    SearchMode,
    SolveResult,
    SolveStatus,
    SwitchRule,
    count_solutions_subtree,
    solve,
)
from .generators import MeshParams, RandomParams, gen_mesh, gen_random, verify_embedding
from .oracle import OracleLimitError, OracleLimits, brute_force_count, brute_force_solutions
from .graphio import GraphFormatError, read_graph, write_graph

__all__ = [
    "DirectedGraph",
    "UndirectedView",
    "connected_components",
    "degree_stats",
    "is_singly_connected",
    "Propagation",
    "SearchState",
    "SipInstance",
    "assign",
    "checkpoint",
    "init_state",
    "propagate_alldiff_fc",
    "propagate_mc_ac",
    "propagate_mc_fc",
    "restore",
    "DecompositionSplit",
    "PseudoTree",
    "ReducedGraph",
    "build_pseudo_tree",
    "build_reduced_graph",
    "detect_decomposition",
    "solve_split",
    "HeuristicResult",
    "cycle_heuristic",
    "partition_heuristic",
    "select_variable",
    "Model",
    "ModelConfig",
    "SearchMode",
    "SolveResult",
    "SolveStatus",
    "SwitchRule",
    "count_solutions_subtree",
    "solve",
    "MeshParams",
    "RandomParams",
    "gen_mesh",
    "gen_random",
    "verify_embedding",
    "OracleLimitError",
    "OracleLimits",
    "brute_force_count",
    "brute_force_solutions",
    "GraphFormatError",
    "read_graph",
    "write_graph",
]

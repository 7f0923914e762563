"""Min-max rooted tree cover planning for multi-robot grid coverage."""

from .errors import MmrtcError
from .generate import generate_instance
from .model import build_model, export_mps, model_stats
from .oracle import oracle_optimum
from .reduction import ReductionParams, build_reduction
from .solution import MmrtcSolution, solution_from_trees
from .solve import SolverConfig, default_solver_config, parameter_search, plan
from .stc import build_plan, circumnavigate, coverage_time
from .terrain import (
    Instance,
    TerrainGraph,
    Tree,
    build_graph,
    decompose,
    dijkstra,
    format_instance,
    minimum_spanning_tree,
    parse_instance,
)
from .validate import validate_solution
from .warmstart import flow_assignment, initial_solution, mst_warmstart

__version__ = "0.1.0"

__all__ = [
    "Instance",
    "MmrtcError",
    "MmrtcSolution",
    "ReductionParams",
    "SolverConfig",
    "TerrainGraph",
    "Tree",
    "build_graph",
    "build_model",
    "build_plan",
    "build_reduction",
    "circumnavigate",
    "coverage_time",
    "decompose",
    "default_solver_config",
    "dijkstra",
    "export_mps",
    "flow_assignment",
    "format_instance",
    "generate_instance",
    "initial_solution",
    "minimum_spanning_tree",
    "model_stats",
    "mst_warmstart",
    "oracle_optimum",
    "parameter_search",
    "parse_instance",
    "plan",
    "solution_from_trees",
    "validate_solution",
]

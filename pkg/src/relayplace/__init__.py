"""Relay node placement for two-tier wireless sensor networks."""

from .bench import BenchmarkSpec, BenchmarkTable, emit_results, run_benchmark
from .candidates import PossiblePosition, build_group, enumerate_possible_positions, neighbors
from .connectivity import TopologyGraph, build_topology, is_connected, mst_steinerize
from .cover import (
    Algorithm,
    CoverSolution,
    OracleLimits,
    WeightConfig,
    exact_min_cover,
    grid_cover,
    lsaa,
    lsaadc,
    nfwga,
    run_cover,
    validate_cover,
    weighted_greedy,
)
from .errors import (
    CoverageValidationError,
    InfeasibleInstanceError,
    InvalidArgumentError,
    RelayPlacementError,
    ResourceLimitError,
)
from .geometry import Point, circle_intersections, nps
from .pipeline import Metrics, PipelineConfig, RunResult, run_pipeline
from .placement import Deployment, Role, Strategy, ilsm, place, rlsa, rlsm
from .scenario import Scenario, derive_seed, generate_scenario

__version__ = "0.1.0"

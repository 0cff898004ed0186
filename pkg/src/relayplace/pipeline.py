"""One end-to-end run: family -> cover -> placement -> steinerisation -> metrics."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from .candidates import enumerate_possible_positions
from .connectivity import TopologyGraph, build_topology, mst_steinerize
from .cover import Algorithm, CoverSolution, OracleLimits, WeightConfig, exact_min_cover, run_cover, validate_cover
from .errors import InvalidArgumentError, RelayPlacementError, ResourceLimitError
from .placement import Deployment, Role, Strategy, deployment_degrees, place
from .scenario import Scenario

# The audit oracle is exponential in n only; the family size is irrelevant.
AUDIT_LIMITS = OracleLimits(max_sensors=14, max_positions=10**6, time_budget=5.0)


@dataclass(frozen=True)
class PipelineConfig:
    cover_algorithm: Algorithm = Algorithm.LSAA
    placement: Strategy = Strategy.RLSA
    weights: WeightConfig = field(default_factory=WeightConfig)
    coverage_k: int = 1
    seed: int = 0
    audit: bool = False

    def __post_init__(self):
        if self.coverage_k not in (1, 2):
            raise InvalidArgumentError("coverage_k must be 1 or 2")
        if self.coverage_k == 2 and self.cover_algorithm is not Algorithm.LSAADC:
            raise InvalidArgumentError("coverage_k=2 requires the LSAADC cover")

    @property
    def name(self) -> str:
        return f"{self.cover_algorithm.value}+{self.placement.value}"


@dataclass(frozen=True)
class Metrics:
    relay_count_cover: int
    relay_count_connectivity: int
    avg_node_degree: float
    min_node_degree: int
    avg_pairwise_relay_distance: float
    avg_sink_distance: float
    runtime_ms: float
    ratio_to_optimum: float | None = None

    @property
    def relay_count_total(self) -> int:
        return self.relay_count_cover + self.relay_count_connectivity

    def as_dict(self) -> dict[str, float]:
        """Numeric fields by name; the optimum ratio only when it was computed."""
        out = {
            "relay_count_cover": float(self.relay_count_cover),
            "relay_count_connectivity": float(self.relay_count_connectivity),
            "relay_count_total": float(self.relay_count_total),
            "avg_node_degree": self.avg_node_degree,
            "min_node_degree": float(self.min_node_degree),
            "avg_pairwise_relay_distance": self.avg_pairwise_relay_distance,
            "avg_sink_distance": self.avg_sink_distance,
            "runtime_ms": self.runtime_ms,
        }
        if self.ratio_to_optimum is not None:
            out["ratio_to_optimum"] = self.ratio_to_optimum
        return out


@dataclass(frozen=True)
class RunResult:
    solution: CoverSolution
    deployment: Deployment
    topology: TopologyGraph
    metrics: Metrics


def _staged(stage: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except RelayPlacementError as exc:
        if not getattr(exc, "stage", None):
            exc.stage = stage
            exc.args = (f"[{stage}] {exc.args[0] if exc.args else exc}",) + exc.args[1:]
        raise


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, (time.perf_counter() - t0) * 1e3


def mean_pairwise_distance(points) -> float:
    if len(points) < 2:
        return 0.0
    a = np.asarray(points, dtype=float)
    d = np.hypot(a[:, None, 0] - a[None, :, 0], a[:, None, 1] - a[None, :, 1])
    iu = np.triu_indices(len(a), k=1)
    return math.fsum(d[iu].tolist()) / len(iu[0])


def run_pipeline(scenario: Scenario, config: PipelineConfig, cache: dict[Any, Any] | None = None) -> RunResult:
    """Run every stage for one scenario.

    ``cache`` may be shared between configs on the same scenario so the family
    and each cover are computed once; cached stage times still count toward
    ``runtime_ms``.
    """
    cache = {} if cache is None else cache
    elapsed = 0.0
    algo = config.cover_algorithm

    family = None
    if algo is not Algorithm.GRID:
        if "family" not in cache:
            cache["family"] = _timed(_staged, "enumerate", enumerate_possible_positions, scenario)
        family, ms = cache["family"]
        elapsed += ms

    key = ("cover", algo, config.weights)
    if key not in cache:
        cache[key] = _timed(_staged, "cover", run_cover, algo, scenario, family, config.weights)
    solution, ms = cache[key]
    elapsed += ms
    k = 2 if algo is Algorithm.LSAADC else 1
    _staged("validate", validate_cover, scenario, solution, k)

    deployment, ms = _timed(_staged, "placement", place, config.placement, solution, scenario, config.seed)
    elapsed += ms
    cover_pts = deployment.points(Role.COVER)
    degrees = deployment_degrees(scenario, deployment)
    if degrees and min(degrees) < k:
        raise RelayPlacementError(f"[placement] sensor degree {min(degrees)} < {k} after placement")

    added, ms = _timed(_staged, "connect", mst_steinerize, cover_pts, scenario.sink, scenario.R)
    elapsed += ms
    deployment = deployment.with_connectivity(added)
    topology = build_topology(cover_pts, scenario.sink, scenario.R, steiner=added)

    ratio = None
    if config.audit and algo is not Algorithm.LSAADC and scenario.n <= AUDIT_LIMITS.max_sensors and scenario.n:
        if "optimum" not in cache:
            try:
                fam = family if family is not None else enumerate_possible_positions(scenario)
                cache["optimum"] = len(exact_min_cover(scenario, fam, AUDIT_LIMITS))
            except ResourceLimitError:
                cache["optimum"] = None
        if cache["optimum"]:
            ratio = len(solution) / cache["optimum"]

    metrics = Metrics(
        relay_count_cover=len(cover_pts),
        relay_count_connectivity=len(added),
        avg_node_degree=(math.fsum(degrees) / len(degrees)) if degrees else 0.0,
        min_node_degree=min(degrees) if degrees else 0,
        avg_pairwise_relay_distance=mean_pairwise_distance(cover_pts),
        avg_sink_distance=(math.fsum(math.dist(p, scenario.sink) for p in cover_pts) / len(cover_pts)) if cover_pts else 0.0,
        runtime_ms=elapsed,
        ratio_to_optimum=ratio,
    )
    return RunResult(solution, deployment, topology, metrics)


def with_seed(config: PipelineConfig, seed: int) -> PipelineConfig:
    return replace(config, seed=seed)

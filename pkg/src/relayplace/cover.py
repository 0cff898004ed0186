"""Set-cover engines over a family of possible positions.

Sensor sets are ``int`` bitmasks throughout; ``PossiblePosition.mask`` is the
covered set of a position. Every selection tie is broken toward the lowest
position id so that runs are reproducible.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .candidates import (
    PositionKind,
    PossiblePosition,
    bits,
    coverage_masks,
    enumerate_possible_positions,
    mask_of,
)
from .errors import CoverageValidationError, InfeasibleInstanceError, InvalidArgumentError, ResourceLimitError
from .geometry import Point
from .scenario import Scenario

_WEIGHT_EPS = 1e-12


class Algorithm(enum.Enum):
    NFWGA = "NFWGA"
    LSAA = "LSAA"
    LSAADC = "LSAADC"
    WEIGHTED_GREEDY = "WeightedGreedy"
    GRID = "Grid"
    EXACT = "ExactOracle"


@dataclass(frozen=True)
class WeightConfig:
    """Per-sensor weights of the neighbour-first greedy score.

    ``alpha`` scores uncovered sensors that neighbouring positions of the
    deployed relays also reach, ``beta`` the remaining uncovered sensors and
    ``gamma`` sensors that are already covered.
    """

    alpha: float = 5.0
    beta: float = 1.0
    gamma: float = 0.01

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise InvalidArgumentError("alpha and beta must be positive")
        if not 0 <= self.gamma <= self.beta / 10:
            raise InvalidArgumentError("gamma must satisfy 0 <= gamma <= beta/10")


@dataclass(frozen=True)
class CoverSolution:
    positions: tuple[PossiblePosition, ...]
    degrees: tuple[int, ...]
    algorithm: Algorithm

    @property
    def position_ids(self) -> list[int]:
        return [p.id for p in self.positions]

    def __len__(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class OracleLimits:
    max_sensors: int = 14
    max_positions: int = 30
    time_budget: float = 10.0


def make_solution(positions: Sequence[PossiblePosition], n: int, algorithm: Algorithm) -> CoverSolution:
    degrees = [0] * n
    for p in positions:
        for s in p.covered:
            degrees[s] += 1
    return CoverSolution(tuple(positions), tuple(degrees), algorithm)


def _reach(family: Sequence[PossiblePosition], n: int) -> list[int]:
    """reach[s] = union of the covered sets of all positions containing sensor s."""
    reach = [0] * n
    for p in family:
        for s in p.covered:
            reach[s] |= p.mask
    return reach


def _neighbourhood(sensors_mask: int, reach: Sequence[int]) -> int:
    out = 0
    for s in bits(sensors_mask):
        out |= reach[s]
    return out


def _nfwga(
    targets: int,
    candidates: Sequence[PossiblePosition],
    weights: WeightConfig,
    reach: Sequence[int],
    deployed_cover: int,
    uncovered: int,
    score_all: bool = False,
) -> list[PossiblePosition]:
    a, b, g = weights.alpha, weights.beta, weights.gamma
    pool = sorted(candidates, key=lambda p: p.id)
    nbr = _neighbourhood(deployed_cover, reach)
    covered = deployed_cover
    picked: list[PossiblePosition] = []
    while targets:
        scope = uncovered if score_all else targets
        sn = scope & nbr
        best, best_w = -1, -math.inf
        for k, p in enumerate(pool):
            if not p.mask & targets:
                continue
            hit = p.mask & scope
            w = a * (hit & sn).bit_count() + b * (hit & ~sn).bit_count() + g * (p.mask & ~uncovered).bit_count()
            if w > best_w + _WEIGHT_EPS:
                best, best_w = k, w
        if best < 0:
            raise InfeasibleInstanceError(f"sensors {bits(targets)} are not covered by any position")
        p = pool.pop(best)
        picked.append(p)
        nbr |= _neighbourhood(p.mask & ~covered, reach)
        covered |= p.mask
        targets &= ~p.mask
        uncovered &= ~p.mask
    return picked


def nfwga(
    targets: Iterable[int],
    family: Sequence[PossiblePosition],
    weights: WeightConfig = WeightConfig(),
    deployed: Sequence[int] = (),
) -> list[int]:
    """Neighbour-first weighted greedy cover of ``targets``; returns ids in pick order.

    ``deployed`` ids (looked up in ``family``) seed the neighbourhood that
    earns the ``alpha`` weight. Sensors outside ``targets`` that are not
    covered by a deployed position count as uncovered.
    """
    by_id = {p.id: p for p in family}
    n = 1 + max((s for p in family for s in p.covered), default=-1)
    deployed_cover = 0
    for pid in deployed:
        deployed_cover |= by_id[pid].mask
    target_mask = mask_of(targets) & ~deployed_cover
    skip = set(deployed)
    pool = [p for p in family if p.id not in skip]
    all_sensors = (1 << n) - 1
    uncovered = all_sensors & ~deployed_cover
    return [p.id for p in _nfwga(target_mask, pool, weights, _reach(family, n), deployed_cover, uncovered)]


def _lsaa_positions(n: int, family: Sequence[PossiblePosition], weights: WeightConfig) -> list[PossiblePosition]:
    reach = _reach(family, n)
    uncovered = (1 << n) - 1
    available = {p.id: p for p in family}
    order = sorted(available)
    chosen: list[PossiblePosition] = []
    while uncovered:
        seed, seed_hit = None, 0
        for pid in order:
            p = available.get(pid)
            if p is None:
                continue
            hit = (p.mask & uncovered).bit_count()
            if hit > seed_hit:
                seed, seed_hit = p, hit
        if seed is None:
            raise InfeasibleInstanceError(f"sensors {bits(uncovered)} are not covered by any position")
        del available[seed.id]

        # The local search covers the whole group (seed sensors plus ring) and
        # may pick the seed itself; its neighbourhood starts empty per group.
        group = (_neighbourhood(seed.mask, reach) | seed.mask) & uncovered
        pool = [p for p in available.values() if p.mask & group]
        pool.append(seed)
        pp = _nfwga(group, pool, weights, reach, 0, uncovered, score_all=True)

        for p in pp:
            available.pop(p.id, None)
        for j in range(len(pp)):
            others = 0
            for k, q in enumerate(pp):
                if k != j:
                    others |= q.mask
            only_here = pp[j].mask & ~others & uncovered
            current = pp[j]
            cur_gain = (current.mask & uncovered).bit_count()
            for pid in order:
                q = available.get(pid)
                if q is not None and q.mask & only_here == only_here:
                    g = (q.mask & uncovered).bit_count()
                    if g > cur_gain:
                        current, cur_gain = q, g
            if current is not pp[j]:
                pp[j] = current
                available.pop(current.id, None)

        for p in pp:
            uncovered &= ~p.mask
        chosen.extend(pp)
    return chosen


def lsaa(scenario: Scenario, family: Sequence[PossiblePosition], weights: WeightConfig = WeightConfig()) -> CoverSolution:
    """Two-phase group-then-local-search single cover."""
    return make_solution(_lsaa_positions(scenario.n, family, weights), scenario.n, Algorithm.LSAA)


def lsaadc(scenario: Scenario, family: Sequence[PossiblePosition], weights: WeightConfig = WeightConfig()) -> CoverSolution:
    """Double cover: LSAA, then LSAA again over the sensors still below degree 2.

    Second-pass positions come from a family enumerated over the deficient
    sensors only; they get ids after ``len(family)`` and their covered sets
    are recomputed against every sensor of the scenario.
    """
    first = _lsaa_positions(scenario.n, family, weights)
    degrees = make_solution(first, scenario.n, Algorithm.LSAADC).degrees
    weak = [s for s, d in enumerate(degrees) if d < 2]
    if not weak:
        return make_solution(first, scenario.n, Algorithm.LSAADC)
    sub = scenario.subset(weak)
    second = _lsaa_positions(sub.n, enumerate_possible_positions(sub), weights)
    anchors = [(p.anchor, p.kind) for p in second]
    masks = coverage_masks(np.asarray([a for a, _ in anchors]), scenario.sensor_array(), scenario.r)
    extra = [
        PossiblePosition(len(family) + k, tuple(bits(m)), a, kind, m, second_pass=True)
        for k, ((a, kind), m) in enumerate(zip(anchors, masks))
    ]
    return make_solution(first + extra, scenario.n, Algorithm.LSAADC)


def _plain_greedy(n: int, family: Sequence[PossiblePosition], score) -> list[PossiblePosition]:
    uncovered = (1 << n) - 1
    pool = sorted(family, key=lambda p: p.id)
    chosen = []
    while uncovered:
        best, best_w = -1, -math.inf
        for k, p in enumerate(pool):
            if not p.mask & uncovered:
                continue
            w = score(p, uncovered)
            if w > best_w + _WEIGHT_EPS:
                best, best_w = k, w
        if best < 0:
            raise InfeasibleInstanceError(f"sensors {bits(uncovered)} are not covered by any position")
        p = pool.pop(best)
        chosen.append(p)
        uncovered &= ~p.mask
    return chosen


def weighted_greedy(scenario: Scenario, family: Sequence[PossiblePosition], alpha: float | None = None) -> CoverSolution:
    """Greedy on |U∩P| - alpha(|P| - |U∩P|) with 0 < alpha <= 1/n."""
    n = scenario.n
    if n == 0:
        return make_solution([], 0, Algorithm.WEIGHTED_GREEDY)
    if alpha is None:
        alpha = 1.0 / n
    if not 0 < alpha <= 1.0 / n:
        raise InvalidArgumentError(f"alpha must lie in (0, 1/n], got {alpha}")

    def score(p, uncovered):
        new = (p.mask & uncovered).bit_count()
        return new - alpha * (p.size - new)

    return make_solution(_plain_greedy(n, family, score), n, Algorithm.WEIGHTED_GREEDY)


def grid_vertices(scenario: Scenario) -> list[Point]:
    """Centers of square cells of side r*sqrt(2) tiling the field, row-major.

    Every point of a cell is within r of its center.
    """
    pitch = scenario.r * math.sqrt(2)
    nx = max(1, math.ceil(scenario.field_width / pitch))
    ny = max(1, math.ceil(scenario.field_height / pitch))
    return [Point((i + 0.5) * pitch, (j + 0.5) * pitch) for j in range(ny) for i in range(nx)]


def grid_cover(scenario: Scenario) -> CoverSolution:
    verts = grid_vertices(scenario)
    masks = coverage_masks(np.asarray(verts), scenario.sensor_array(), scenario.r)
    family = [
        PossiblePosition(k, tuple(bits(m)), v, PositionKind.GRID_VERTEX, m)
        for k, (v, m) in enumerate(zip(verts, masks))
        if m
    ]
    chosen = _plain_greedy(scenario.n, family, lambda p, u: (p.mask & u).bit_count())
    return make_solution(chosen, scenario.n, Algorithm.GRID)


def exact_min_cover(
    scenario: Scenario,
    family: Sequence[PossiblePosition],
    limits: OracleLimits = OracleLimits(),
) -> CoverSolution:
    """Provably minimum cover; the lexicographically smallest id set among minima.

    Memoised search over uncovered-sensor masks, always branching on the
    lowest uncovered sensor, so the cost is bounded by 2^n * |family|.
    """
    n = scenario.n
    if n > limits.max_sensors:
        raise ResourceLimitError(f"{n} sensors exceed the oracle limit of {limits.max_sensors}")
    if len(family) > limits.max_positions:
        raise ResourceLimitError(f"{len(family)} positions exceed the oracle limit of {limits.max_positions}")
    if n == 0:
        return make_solution([], 0, Algorithm.EXACT)
    full = (1 << n) - 1
    pool = sorted(family, key=lambda p: p.id)
    containing: list[list[int]] = [[] for _ in range(n)]
    for p in pool:
        for s in p.covered:
            if s < n:
                containing[s].append(p.mask & full)
    for s in range(n):
        if not containing[s]:
            raise InfeasibleInstanceError(f"sensor {s} is not covered by any position")
        containing[s] = sorted(set(containing[s]))

    deadline = time.monotonic() + limits.time_budget
    calls = 0

    @lru_cache(maxsize=None)
    def need(mask: int) -> int:
        nonlocal calls
        if not mask:
            return 0
        calls += 1
        if calls & 1023 == 0 and time.monotonic() > deadline:
            raise ResourceLimitError(f"oracle exceeded its {limits.time_budget}s budget")
        low = (mask & -mask).bit_length() - 1
        return 1 + min(need(mask & ~m) for m in containing[low])

    chosen = []
    remaining = full
    size = need(remaining)
    while remaining:
        for p in pool:
            if p.mask & remaining and need(remaining & ~p.mask) == size - len(chosen) - 1:
                chosen.append(p)
                remaining &= ~p.mask
                break
    need.cache_clear()
    return make_solution(chosen, n, Algorithm.EXACT)


def geometric_degrees(scenario: Scenario, anchors: Sequence[Point]) -> list[int]:
    """Per-sensor count of the given coordinates lying within r (+ slack)."""
    deg = [0] * scenario.n
    if not anchors or not scenario.n:
        return deg
    for m in coverage_masks(np.asarray(anchors, dtype=float), scenario.sensor_array(), scenario.r):
        for s in bits(m):
            deg[s] += 1
    return deg


def validate_cover(scenario: Scenario, solution: CoverSolution, k: int = 1) -> list[int]:
    """Degrees recomputed from anchor geometry; raises if any sensor is below ``k``."""
    deg = geometric_degrees(scenario, [p.anchor for p in solution.positions])
    for s, d in enumerate(deg):
        if d < k:
            raise CoverageValidationError(s, d, k)
    return deg


def run_cover(
    algorithm: Algorithm,
    scenario: Scenario,
    family: Sequence[PossiblePosition] | None = None,
    weights: WeightConfig = WeightConfig(),
    limits: OracleLimits = OracleLimits(),
) -> CoverSolution:
    if algorithm is Algorithm.GRID:
        return grid_cover(scenario)
    if family is None:
        family = enumerate_possible_positions(scenario)
    if algorithm is Algorithm.LSAA:
        return lsaa(scenario, family, weights)
    if algorithm is Algorithm.LSAADC:
        return lsaadc(scenario, family, weights)
    if algorithm is Algorithm.WEIGHTED_GREEDY:
        return weighted_greedy(scenario, family)
    if algorithm is Algorithm.EXACT:
        return exact_min_cover(scenario, family, limits)
    if algorithm is Algorithm.NFWGA:
        ids = nfwga(range(scenario.n), family, weights)
        by_id = {p.id: p for p in family}
        return make_solution([by_id[i] for i in ids], scenario.n, Algorithm.NFWGA)
    raise InvalidArgumentError(f"unknown cover algorithm {algorithm}")

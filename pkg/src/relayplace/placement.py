"""Turn chosen possible positions into concrete relay coordinates.

Three strategies share one candidate generator and one collision policy:

* ``rlsa`` -- the full-covering candidate nearest to the sink;
* ``ilsm`` -- the first pairwise circle intersection that covers the position;
* ``rlsm`` -- a seeded uniform point of the region covering the position.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .candidates import PossiblePosition
from .cover import CoverSolution, geometric_degrees
from .errors import InvalidArgumentError
from .geometry import Point, circle_intersections, dist, nearest_point_on_disc, nps, tolerance
from .scenario import Scenario

MIN_SEPARATION = 1e-6


class Role(enum.Enum):
    COVER = "Cover"
    CONNECTIVITY = "Connectivity"


class Strategy(enum.Enum):
    RLSA = "RLSA"
    ILSM = "ILSM"
    RLSM = "RLSM"


@dataclass(frozen=True)
class Relay:
    point: Point
    role: Role
    source_position_id: int | None = None


@dataclass(frozen=True)
class Deployment:
    relays: tuple[Relay, ...]
    # ids of positions whose relay sits on the sink itself
    sink_placed: tuple[int, ...] = field(default=())

    def points(self, role: Role | None = None) -> list[Point]:
        return [r.point for r in self.relays if role is None or r.role is role]

    @property
    def cover_count(self) -> int:
        return sum(r.role is Role.COVER for r in self.relays)

    @property
    def connectivity_count(self) -> int:
        return sum(r.role is Role.CONNECTIVITY for r in self.relays)

    def with_connectivity(self, points: Sequence[Point]) -> "Deployment":
        extra = tuple(Relay(Point(p[0], p[1]), Role.CONNECTIVITY) for p in points)
        return Deployment(self.relays + extra, self.sink_placed)


def _covers_all(p: Point, sensors: Sequence[Point], r: float) -> bool:
    lim = r + tolerance(r)
    return all(dist(p, s) <= lim for s in sensors)


def _ordered_by_sink(points: Sequence[Point], sink: Point) -> list[Point]:
    return sorted(points, key=lambda p: (dist(p, sink), p.x, p.y))


def full_covering_candidates(position: PossiblePosition, scenario: Scenario) -> list[Point]:
    """Candidate coordinates that cover every sensor of ``position``, nearest to the sink first.

    Pairs of neighbouring sensors contribute their nearest arc point and both
    circle intersections; a sensor without a neighbour in the position
    contributes the point of its disc nearest to the sink. The anchor, and the
    sink itself when it covers the whole position, are always candidates.
    """
    r, sink = scenario.r, scenario.sink
    tol = tolerance(r)
    members = [scenario.sensors[s] for s in position.covered]
    cands: list[Point] = []
    has_neighbor = [False] * len(members)
    for a in range(len(members)):
        for b in range(a + 1, len(members)):
            d = dist(members[a], members[b])
            if not tol < d <= 2 * r + tol:
                continue
            has_neighbor[a] = has_neighbor[b] = True
            cands.append(nps(members[a], members[b], r, sink).point)
            cands.extend(circle_intersections(members[a], members[b], r))
    for m, paired in zip(members, has_neighbor):
        if not paired:
            cands.append(nearest_point_on_disc(m, r, sink))
    cands.append(position.anchor)
    if _covers_all(sink, members, r):
        cands.append(sink)
    keep = [p for p in cands if _covers_all(p, members, r)]
    return _ordered_by_sink(keep, sink)


def _ilsm_order(position: PossiblePosition, scenario: Scenario) -> list[Point]:
    r = scenario.r
    members = [scenario.sensors[s] for s in position.covered]
    if len(members) == 1:
        return [members[0], position.anchor]
    out = []
    for a in range(len(members)):
        for b in range(a + 1, len(members)):
            pts = sorted(circle_intersections(members[a], members[b], r), key=lambda p: (-p.y, p.x))
            out.extend(p for p in pts if _covers_all(p, members, r))
    out.append(position.anchor)
    return out


class _Placed:
    """Already placed coordinates with a coarse hash grid for collision lookups."""

    def __init__(self):
        self.cells: dict[tuple[int, int], list[Point]] = {}

    def _key(self, p: Point) -> tuple[int, int]:
        return (math.floor(p.x / 1e-3), math.floor(p.y / 1e-3))

    def collides(self, p: Point) -> bool:
        kx, ky = self._key(p)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for q in self.cells.get((kx + dx, ky + dy), ()):
                    if dist(p, q) < MIN_SEPARATION:
                        return True
        return False

    def add(self, p: Point) -> None:
        self.cells.setdefault(self._key(p), []).append(p)


def _settle(ordered: Sequence[Point], members: Sequence[Point], r: float, placed: _Placed) -> Point:
    """First non-colliding point of ``ordered``, else a micro-offset of the first one.

    Offsets move toward other feasible candidates (or their mean), which keeps
    coverage because the feasible region is an intersection of discs and hence
    convex.
    """
    for p in ordered:
        if not placed.collides(p):
            return p
    base = ordered[0]
    aims = [q for q in ordered[1:] if dist(q, base) > MIN_SEPARATION]
    if aims:
        aims.append(Point(sum(q.x for q in ordered) / len(ordered), sum(q.y for q in ordered) / len(ordered)))
    # (unit direction, how far along it the region is known to extend)
    rays = []
    for q in aims:
        d = dist(q, base)
        if d > 0:
            rays.append(((q.x - base.x) / d, (q.y - base.y) / d, d))
    rays.extend((math.cos(t), math.sin(t), math.inf) for t in np.linspace(0, 2 * math.pi, 16, endpoint=False))
    for k in range(1, 10_000):
        step = 1.5 * MIN_SEPARATION * k
        for ux, uy, reach in rays:
            if step > reach:
                continue
            p = Point(base.x + step * ux, base.y + step * uy)
            if _covers_all(p, members, r) and not placed.collides(p):
                return p
    raise RuntimeError("could not find a collision-free relay coordinate")


def _deploy(solution: CoverSolution, scenario: Scenario, chooser) -> Deployment:
    placed = _Placed()
    relays = []
    on_sink = []
    for pos in solution.positions:
        members = [scenario.sensors[s] for s in pos.covered]
        ordered = chooser(pos)
        p = _settle(ordered, members, scenario.r, placed)
        placed.add(p)
        if p == scenario.sink:
            on_sink.append(pos.id)
        relays.append(Relay(p, Role.COVER, pos.id))
    return Deployment(tuple(relays), tuple(on_sink))


def rlsa(solution: CoverSolution, scenario: Scenario) -> Deployment:
    """Sink-nearest full-covering coordinate for every position, in solution order."""
    return _deploy(solution, scenario, lambda pos: full_covering_candidates(pos, scenario))


def ilsm(solution: CoverSolution, scenario: Scenario) -> Deployment:
    return _deploy(solution, scenario, lambda pos: _ilsm_order(pos, scenario))


def _sample_region(members: Sequence[Point], r: float, rng: np.random.Generator, tries: int) -> Point | None:
    """Uniform point of the intersection of the members' discs, by rejection."""
    xs = [m.x for m in members]
    ys = [m.y for m in members]
    lo_x, hi_x = max(xs) - r, min(xs) + r
    lo_y, hi_y = max(ys) - r, min(ys) + r
    if lo_x > hi_x or lo_y > hi_y:
        return None
    for _ in range(tries):
        p = Point(float(rng.uniform(lo_x, hi_x)), float(rng.uniform(lo_y, hi_y)))
        if _covers_all(p, members, r):
            return p
    return None


def rlsm(solution: CoverSolution, scenario: Scenario, rng_seed: int = 0, tries: int = 256) -> Deployment:
    """A seeded uniform point of each position's feasible region.

    Thin regions that defeat ``tries`` rejection rounds fall back to a uniform
    pick among the full-covering candidates.
    """
    rng = np.random.default_rng(rng_seed)

    def choose(pos):
        members = [scenario.sensors[s] for s in pos.covered]
        cands = full_covering_candidates(pos, scenario)
        p = _sample_region(members, scenario.r, rng, tries)
        if p is not None:
            return [p, *cands]
        k = int(rng.integers(len(cands)))
        return [cands[k], *cands[:k], *cands[k + 1:]]

    return _deploy(solution, scenario, choose)


def place(strategy: Strategy, solution: CoverSolution, scenario: Scenario, seed: int = 0) -> Deployment:
    if strategy is Strategy.RLSA:
        return rlsa(solution, scenario)
    if strategy is Strategy.ILSM:
        return ilsm(solution, scenario)
    if strategy is Strategy.RLSM:
        return rlsm(solution, scenario, seed)
    raise InvalidArgumentError(f"unknown placement strategy {strategy}")


def deployment_degrees(scenario: Scenario, deployment: Deployment) -> list[int]:
    """Per-sensor number of cover relays within range, from coordinates."""
    return geometric_degrees(scenario, deployment.points(Role.COVER))

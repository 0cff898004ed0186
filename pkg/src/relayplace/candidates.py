"""The finite family of possible relay positions and its neighbour structure.

A possible position is the region where a relay covers one fixed set of
sensors. Each region is canonicalised by that set (kept both as a sorted
tuple and as an ``int`` bitmask) plus one concrete anchor coordinate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .geometry import Point, circle_intersections, tolerance
from .scenario import Scenario


class PositionKind(enum.Enum):
    PAIR_INTERSECTION = "PairIntersection"
    SENSOR_CENTER = "SensorCenter"
    GRID_VERTEX = "GridVertex"


@dataclass(frozen=True)
class PossiblePosition:
    id: int
    covered: tuple[int, ...]
    anchor: Point
    kind: PositionKind
    mask: int
    second_pass: bool = False

    @property
    def size(self) -> int:
        return len(self.covered)


@dataclass(frozen=True)
class Group:
    seed: int
    neighbor_ids: frozenset[int]
    core_sensors: frozenset[int]
    ring_sensors: frozenset[int]


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def coverage_masks(points: np.ndarray, sensors: np.ndarray, r: float) -> list[int]:
    """Bitmask of sensors within ``r`` (+ slack) of each point."""
    if len(points) == 0:
        return []
    if len(sensors) == 0:
        return [0] * len(points)
    d = np.hypot(points[:, None, 0] - sensors[None, :, 0], points[:, None, 1] - sensors[None, :, 1])
    inside = d <= r + tolerance(r)
    packed = np.packbits(inside, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def candidate_points(sensors: Sequence[Point], r: float) -> list[tuple[Point, PositionKind]]:
    """Pairwise circle intersections followed by the sensor locations."""
    out: list[tuple[Point, PositionKind]] = []
    arr = np.asarray(sensors, dtype=float).reshape(-1, 2)
    if len(arr) > 1:
        d = np.hypot(arr[:, None, 0] - arr[None, :, 0], arr[:, None, 1] - arr[None, :, 1])
        ii, jj = np.nonzero(np.triu(d <= 2 * r + tolerance(r), k=1))
        for a, b in zip(ii.tolist(), jj.tolist()):
            for p in circle_intersections(sensors[a], sensors[b], r):
                out.append((p, PositionKind.PAIR_INTERSECTION))
    out.extend((Point(p[0], p[1]), PositionKind.SENSOR_CENTER) for p in sensors)
    return out


def build_family(
    points: Sequence[tuple[Point, PositionKind]],
    sensors: Sequence[Point],
    r: float,
    *,
    id_offset: int = 0,
    second_pass: bool = False,
) -> list[PossiblePosition]:
    """Deduplicate candidate coordinates by covered set and assign dense ids."""
    if not points:
        return []
    masks = coverage_masks(np.asarray([p for p, _ in points], dtype=float), np.asarray(sensors, dtype=float).reshape(-1, 2), r)
    best: dict[int, tuple[Point, PositionKind]] = {}
    for (p, kind), m in zip(points, masks):
        if m == 0:
            continue
        cur = best.get(m)
        if cur is None or (p.x, p.y) < (cur[0].x, cur[0].y):
            best[m] = (p, kind)
    entries = []
    for m, (p, kind) in best.items():
        cov = tuple(bits(m))
        entries.append((-len(cov), cov, p, kind, m))
    entries.sort(key=lambda e: (e[0], e[1], e[2]))
    return [
        PossiblePosition(id_offset + i, cov, p, kind, m, second_pass)
        for i, (_, cov, p, kind, m) in enumerate(entries)
    ]


def enumerate_possible_positions(scenario: Scenario) -> list[PossiblePosition]:
    """All distinct possible positions of the scenario (at most n(n+1))."""
    if scenario.n == 0:
        return []
    return build_family(candidate_points(scenario.sensors, scenario.r), scenario.sensors, scenario.r)


def _check_pid(pid: int, family: Sequence[PossiblePosition]) -> None:
    if not 0 <= pid < len(family):
        raise InvalidArgumentError(f"position id {pid} out of range 0..{len(family) - 1}")


def neighbors(pid: int, family: Sequence[PossiblePosition]) -> set[int]:
    """Ids of the positions sharing at least one covered sensor with ``pid``."""
    _check_pid(pid, family)
    m = family[pid].mask
    return {q.id for q in family if q.id != pid and q.mask & m}


def build_group(pid: int, family: Sequence[PossiblePosition], remaining: Iterable[int]) -> Group:
    _check_pid(pid, family)
    rem = mask_of(remaining)
    own = family[pid].mask
    nbrs = neighbors(pid, family)
    ring = 0
    for q in nbrs:
        ring |= family[q].mask
    ring &= ~own
    return Group(
        seed=pid,
        neighbor_ids=frozenset(nbrs),
        core_sensors=frozenset(bits(own & rem)),
        ring_sensors=frozenset(bits(ring & rem)),
    )

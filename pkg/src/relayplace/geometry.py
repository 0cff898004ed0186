"""Planar disc and circle-arc primitives.

All sensors share one communication radius, so every routine works with
equal-radius circles. Membership and tangency predicates use the absolute
slack returned by :func:`tolerance`.
"""

from __future__ import annotations

import enum
import math
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidArgumentError


class Point(NamedTuple):
    x: float
    y: float


class Branch(enum.Enum):
    RAY_HIT_ON_ARC = "RayHitOnArc"
    ENDPOINT_C = "EndpointC"
    ENDPOINT_D = "EndpointD"
    SINK_INSIDE_LENS = "SinkInsideLens"


class ArcQueryResult(NamedTuple):
    point: Point
    branch: Branch


def tolerance(radius: float) -> float:
    return 1e-9 * max(1.0, radius)


def as_point(value: Sequence[float]) -> Point:
    """Coerce a 2-sequence to a finite :class:`Point`."""
    if len(value) != 2:
        raise InvalidArgumentError(f"expected 2 coordinates, got {len(value)}")
    x, y = float(value[0]), float(value[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidArgumentError(f"non-finite point ({x}, {y})")
    return Point(x, y)


def dist(a: Sequence[float], b: Sequence[float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def _check_radius(radius: float) -> None:
    if not radius > 0 or not math.isfinite(radius):
        raise InvalidArgumentError(f"radius must be positive, got {radius}")


def circle_intersections(c1: Point, c2: Point, radius: float) -> list[Point]:
    """Intersection points of two circles of equal ``radius``.

    Two points are returned in the order (left of c1->c2, right of c1->c2);
    tangent circles give one point and disjoint or concentric ones give none.
    """
    _check_radius(radius)
    tol = tolerance(radius)
    dx, dy = c2[0] - c1[0], c2[1] - c1[1]
    d = math.hypot(dx, dy)
    if d <= tol or d > 2 * radius + tol:
        return []
    mx, my = c1[0] + dx / 2, c1[1] + dy / 2
    if abs(d - 2 * radius) <= tol:
        return [Point(mx, my)]
    h = math.sqrt(radius * radius - d * d / 4)
    ux, uy = -dy / d, dx / d
    return [Point(mx + h * ux, my + h * uy), Point(mx - h * ux, my - h * uy)]


def nearest_point_on_disc(center: Point, radius: float, target: Point) -> Point:
    _check_radius(radius)
    d = dist(center, target)
    if d <= radius:
        return Point(target[0], target[1])
    s = radius / d
    return Point(center[0] + s * (target[0] - center[0]), center[1] + s * (target[1] - center[1]))


def _lens_endpoints(xi: Point, xj: Point, radius: float) -> list[Point]:
    _check_radius(radius)
    d = dist(xi, xj)
    tol = tolerance(radius)
    if d <= tol:
        raise InvalidArgumentError("concentric discs have no intersection arc")
    if d > 2 * radius + tol:
        raise InvalidArgumentError(f"discs do not intersect (distance {d} > {2 * radius})")
    return circle_intersections(xi, xj, radius)


def nps(xi: Point, xj: Point, radius: float, sink: Point) -> ArcQueryResult:
    """Point of the two-disc intersection arc nearest to ``sink``.

    The ray from each center toward the sink meets its own circle at the
    nearest point of that circle; when that point also lies in the other disc
    it is on the arc. Otherwise the optimum sits at an arc endpoint. A sink
    inside the lens is returned unchanged.
    """
    ends = _lens_endpoints(xi, xj, radius)
    tol = tolerance(radius)
    if dist(sink, xi) <= radius + tol and dist(sink, xj) <= radius + tol:
        return ArcQueryResult(Point(sink[0], sink[1]), Branch.SINK_INSIDE_LENS)

    best: ArcQueryResult | None = None
    best_d = math.inf
    for c, other in ((xi, xj), (xj, xi)):
        d_cs = dist(c, sink)
        if d_cs == 0.0:
            # Every point of this circle is equidistant; the other ray decides.
            continue
        s = radius / d_cs
        p = Point(c[0] + s * (sink[0] - c[0]), c[1] + s * (sink[1] - c[1]))
        if dist(p, other) <= radius + tol:
            d = dist(p, sink)
            if d < best_d:
                best, best_d = ArcQueryResult(p, Branch.RAY_HIT_ON_ARC), d
    # Outside the union of the discs the first ray hit is already optimal;
    # the comparison below only matters for sinks inside exactly one disc.
    for p, branch in zip(ends, (Branch.ENDPOINT_C, Branch.ENDPOINT_D)):
        d = dist(p, sink)
        if d < best_d - tol:
            best, best_d = ArcQueryResult(p, branch), d
    assert best is not None
    return best


def arc_samples(xi: Point, xj: Point, radius: float, samples: int) -> np.ndarray:
    """``(2*samples, 2)`` points spread over both arcs bounding the lens, endpoints included."""
    if samples < 3:
        raise InvalidArgumentError("samples must be >= 3")
    _lens_endpoints(xi, xj, radius)
    d = dist(xi, xj)
    half = math.acos(min(1.0, d / (2 * radius)))
    chunks = []
    for c, other in ((xi, xj), (xj, xi)):
        mid = math.atan2(other[1] - c[1], other[0] - c[0])
        phi = np.linspace(mid - half, mid + half, samples)
        chunks.append(np.column_stack((c[0] + radius * np.cos(phi), c[1] + radius * np.sin(phi))))
    return np.vstack(chunks)


def arc_nearest_oracle(xi: Point, xj: Point, radius: float, sink: Point, samples: int) -> Point:
    """Brute-force minimiser of the distance to ``sink`` over sampled arc points."""
    pts = arc_samples(xi, xj, radius, samples)
    k = int(np.argmin(np.hypot(pts[:, 0] - sink[0], pts[:, 1] - sink[1])))
    return Point(float(pts[k, 0]), float(pts[k, 1]))

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relayplace.errors import InvalidArgumentError
from relayplace.geometry import (
    Branch,
    Point,
    arc_nearest_oracle,
    arc_samples,
    as_point,
    circle_intersections,
    dist,
    nearest_point_on_disc,
    nps,
    tolerance,
)

SQRT75 = math.sqrt(75)


def close(p, q, eps=1e-9):
    return dist(p, q) <= eps


class TestCircleIntersections:
    def test_tangent(self):
        assert circle_intersections(Point(0, 0), Point(20, 0), 10) == [Point(10, 0)]

    def test_symmetric_pair(self):
        pts = circle_intersections(Point(0, 0), Point(10, 0), 10)
        assert len(pts) == 2
        assert close(pts[0], (5, SQRT75)) and close(pts[1], (5, -SQRT75))

    def test_disjoint(self):
        assert circle_intersections(Point(0, 0), Point(25, 0), 10) == []

    def test_concentric(self):
        assert circle_intersections(Point(3, 3), Point(3, 3), 10) == []

    def test_bad_radius(self):
        with pytest.raises(InvalidArgumentError):
            circle_intersections(Point(0, 0), Point(1, 0), 0)
        with pytest.raises(InvalidArgumentError):
            circle_intersections(Point(0, 0), Point(1, 0), -2)

    @given(
        st.floats(-50, 50), st.floats(-50, 50), st.floats(0.01, 2.0), st.floats(0, 2 * math.pi), st.floats(0.5, 30)
    )
    def test_points_on_both_circles_and_mirrored(self, x, y, frac, theta, r):
        c1 = Point(x, y)
        c2 = Point(x + frac * r * math.cos(theta), y + frac * r * math.sin(theta))
        pts = circle_intersections(c1, c2, r)
        assert len(pts) in (1, 2)
        for p in pts:
            assert abs(dist(p, c1) - r) <= 1e-7 * max(1, r)
            assert abs(dist(p, c2) - r) <= 1e-7 * max(1, r)
        if len(pts) == 2:
            # mirror images across the center line: same midpoint as the centers
            mid = Point((pts[0].x + pts[1].x) / 2, (pts[0].y + pts[1].y) / 2)
            assert close(mid, ((c1.x + c2.x) / 2, (c1.y + c2.y) / 2), 1e-7 * max(1, r))


class TestNearestPointOnDisc:
    @pytest.mark.parametrize(
        "target,expected",
        [((30, 0), (10, 0)), ((3, 4), (3, 4)), ((30, 40), (6, 8))],
    )
    def test_examples(self, target, expected):
        assert close(nearest_point_on_disc(Point(0, 0), 10, Point(*target)), expected)


class TestNps:
    def test_ray_hit(self):
        res = nps(Point(0, 0), Point(10, 0), 10, Point(100, 0))
        assert res.branch is Branch.RAY_HIT_ON_ARC
        assert close(res.point, (10, 0))

    def test_endpoint(self):
        res = nps(Point(0, 0), Point(10, 0), 10, Point(5, 100))
        assert res.branch is Branch.ENDPOINT_C
        assert close(res.point, (5, SQRT75), 1e-7)

    def test_sink_inside_lens(self):
        res = nps(Point(0, 0), Point(10, 0), 10, Point(5, 1))
        assert res.branch is Branch.SINK_INSIDE_LENS
        assert res.point == Point(5, 1)

    def test_tangent_degenerates(self):
        res = nps(Point(0, 0), Point(20, 0), 10, Point(0, 50))
        assert close(res.point, (10, 0), 1e-6)

    @pytest.mark.parametrize("xj", [(0, 0), (25, 0)])
    def test_invalid_pairs(self, xj):
        with pytest.raises(InvalidArgumentError):
            nps(Point(0, 0), Point(*xj), 10, Point(50, 50))

    def test_sink_on_a_center(self):
        # sink at xi, which is outside xj's disc only when d > r
        res = nps(Point(0, 0), Point(15, 0), 10, Point(0, 0))
        assert close(res.point, (5, 0), 1e-9)

    @given(
        st.floats(0, 100), st.floats(0, 100), st.floats(0.02, 1.99), st.floats(0, 2 * math.pi),
        st.floats(-200, 200), st.floats(-200, 200), st.floats(1, 20),
    )
    def test_covers_both_and_symmetric(self, x, y, frac, theta, sx, sy, r):
        xi = Point(x, y)
        xj = Point(x + frac * r * math.cos(theta), y + frac * r * math.sin(theta))
        sink = Point(sx, sy)
        a = nps(xi, xj, r, sink)
        b = nps(xj, xi, r, sink)
        tol = tolerance(r) * 10
        for res in (a, b):
            assert dist(res.point, xi) <= r + tol and dist(res.point, xj) <= r + tol
        assert abs(dist(a.point, sink) - dist(b.point, sink)) <= 1e-9 * max(1, r)


class TestArcOracle:
    def test_tangent(self):
        for k in (3, 10, 1000):
            assert close(arc_nearest_oracle(Point(0, 0), Point(20, 0), 10, Point(0, 50), k), (10, 0), 1e-9)

    def test_converges(self):
        p = arc_nearest_oracle(Point(0, 0), Point(10, 0), 10, Point(100, 0), 10**5)
        assert close(p, (10, 0), 1e-3)

    def test_samples_on_lens_boundary(self):
        pts = arc_samples(Point(0, 0), Point(12, 5), 10, 50)
        assert pts.shape == (100, 2)
        d1 = np.hypot(pts[:, 0], pts[:, 1])
        d2 = np.hypot(pts[:, 0] - 12, pts[:, 1] - 5)
        assert np.all(np.minimum(np.abs(d1 - 10), np.abs(d2 - 10)) < 1e-9)
        assert np.all(np.maximum(d1, d2) <= 10 + 1e-9)

    def test_too_few_samples(self):
        with pytest.raises(InvalidArgumentError):
            arc_samples(Point(0, 0), Point(10, 0), 10, 2)

    def test_never_beats_nps(self, rng):
        for _ in range(1000):
            r = float(rng.uniform(1, 20))
            xi = Point(*rng.uniform(0, 100, 2))
            ang = rng.uniform(0, 2 * math.pi)
            d = rng.uniform(0.01, 2) * r
            xj = Point(xi.x + d * math.cos(ang), xi.y + d * math.sin(ang))
            sink = Point(*rng.uniform(-50, 150, 2))
            q = arc_nearest_oracle(xi, xj, r, sink, 200)
            assert dist(q, sink) >= dist(nps(xi, xj, r, sink).point, sink) - 1e-9


def test_as_point_rejects_nonfinite():
    with pytest.raises(InvalidArgumentError):
        as_point((math.nan, 0))
    with pytest.raises(InvalidArgumentError):
        as_point((1, 2, 3))

import math

import numpy as np
import pytest

from relayplace.candidates import enumerate_possible_positions
from relayplace.cover import Algorithm, lsaa, lsaadc, run_cover, validate_cover
from relayplace.geometry import Point, dist
from relayplace.placement import (
    MIN_SEPARATION,
    Role,
    Strategy,
    deployment_degrees,
    full_covering_candidates,
    ilsm,
    place,
    rlsa,
    rlsm,
)
from relayplace.scenario import generate_scenario

from conftest import make_scenario

SQRT75 = math.sqrt(75)


def single(points, sink, r=10.0):
    sc = make_scenario(points, r=r, sink=sink)
    return sc, lsaa(sc, enumerate_possible_positions(sc))


def region_samples(members, r, k=400):
    """Dense lattice of the intersection of the members' discs."""
    xs = [m.x for m in members]
    ys = [m.y for m in members]
    gx, gy = np.meshgrid(np.linspace(max(xs) - r, min(xs) + r, k), np.linspace(max(ys) - r, min(ys) + r, k))
    pts = np.column_stack((gx.ravel(), gy.ravel()))
    ok = np.ones(len(pts), bool)
    for m in members:
        ok &= np.hypot(pts[:, 0] - m.x, pts[:, 1] - m.y) <= r
    return pts[ok]


def assert_distinct(points):
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            assert dist(points[i], points[j]) >= MIN_SEPARATION


class TestRlsa:
    def test_pair_toward_far_sink(self):
        sc, sol = single([(0, 0), (10, 0)], sink=(100, 0))
        assert len(sol) == 1
        assert rlsa(sol, sc).points() == [Point(10, 0)]

    def test_singleton(self):
        sc, sol = single([(0, 0)], sink=(30, 40))
        p = rlsa(sol, sc).points()[0]
        assert dist(p, (6, 8)) < 1e-12

    def test_sink_covering_position_uses_sink(self):
        sc, sol = single([(45, 50), (55, 50)], sink=(50, 52))
        dep = rlsa(sol, sc)
        assert dep.points() == [Point(50, 52)]
        assert dep.sink_placed == (sol.positions[0].id,)

    def test_nearest_among_candidates(self):
        sc = generate_scenario(50, seed=2)
        sol = lsaa(sc, enumerate_possible_positions(sc))
        dep = rlsa(sol, sc)
        for pos, relay in zip(sol.positions, dep.relays):
            cands = full_covering_candidates(pos, sc)
            assert relay.source_position_id == pos.id
            assert all(dist(relay.point, sc.sink) <= dist(c, sc.sink) + 1e-9 for c in cands)

    def test_nearest_over_whole_region(self):
        for seed in range(6):
            sc = generate_scenario(40, seed=300 + seed)
            sol = lsaa(sc, enumerate_possible_positions(sc))
            for pos, p in zip(sol.positions, rlsa(sol, sc).points()):
                members = [sc.sensors[s] for s in pos.covered]
                samples = region_samples(members, sc.r)
                if len(samples) == 0:
                    continue
                best = np.hypot(samples[:, 0] - sc.sink.x, samples[:, 1] - sc.sink.y).min()
                assert dist(p, sc.sink) <= best + 1e-9


class TestIlsm:
    def test_pair(self):
        sc, sol = single([(0, 0), (10, 0)], sink=(100, 0))
        p = ilsm(sol, sc).points()[0]
        assert dist(p, (5, SQRT75)) < 1e-7

    def test_singleton(self):
        sc, sol = single([(7, 7)], sink=(50, 50))
        assert ilsm(sol, sc).points() == [Point(7, 7)]


class TestRlsm:
    def test_singleton_within_reach(self):
        sc, sol = single([(30, 30)], sink=(50, 50))
        for seed in range(20):
            assert dist(rlsm(sol, sc, seed).points()[0], (30, 30)) <= 10 + 1e-9

    def test_seeded(self):
        sc = generate_scenario(30, seed=8)
        sol = lsaa(sc, enumerate_possible_positions(sc))
        assert rlsm(sol, sc, 5) == rlsm(sol, sc, 5)
        assert rlsm(sol, sc, 5) != rlsm(sol, sc, 6)

    def test_farther_from_sink_than_rlsa_on_average(self):
        sc = generate_scenario(30, seed=8)
        sol = lsaa(sc, enumerate_possible_positions(sc))
        base = np.mean([dist(p, sc.sink) for p in rlsa(sol, sc).points()])
        means = [np.mean([dist(p, sc.sink) for p in rlsm(sol, sc, s).points()]) for s in range(100)]
        assert np.mean(means) >= base


@pytest.mark.parametrize("strategy", list(Strategy))
def test_coverage_and_distinctness(strategy):
    for seed in range(8):
        sc = generate_scenario(45, seed=seed)
        fam = enumerate_possible_positions(sc)
        for algo, k in ((Algorithm.LSAA, 1), (Algorithm.LSAADC, 2), (Algorithm.WEIGHTED_GREEDY, 1)):
            sol = run_cover(algo, sc, fam)
            dep = place(strategy, sol, sc, seed)
            pts = dep.points(Role.COVER)
            assert len(pts) == len(sol) == dep.cover_count and dep.connectivity_count == 0
            assert min(deployment_degrees(sc, dep)) >= k
            assert_distinct(pts)
            for pos, p in zip(sol.positions, pts):
                assert all(dist(p, sc.sensors[s]) <= sc.r + 1e-8 for s in pos.covered)


def test_sink_proximity_dominance():
    for seed in range(8):
        sc = generate_scenario(40, seed=40 + seed)
        sol = lsaa(sc, enumerate_possible_positions(sc))
        a = rlsa(sol, sc).points()
        b = ilsm(sol, sc).points()
        c = rlsm(sol, sc, seed).points()
        for pa, pb, pc in zip(a, b, c):
            assert dist(pa, sc.sink) <= dist(pb, sc.sink) + 1e-9
            assert dist(pa, sc.sink) <= dist(pc, sc.sink) + 1e-9


def test_double_cover_of_single_sensor_gets_two_coordinates():
    sc = make_scenario([(30, 30)])
    sol = lsaadc(sc, enumerate_possible_positions(sc))
    for strategy in Strategy:
        pts = place(strategy, sol, sc, 1).points()
        assert len(pts) == 2 and dist(pts[0], pts[1]) >= MIN_SEPARATION
        assert all(dist(p, (30, 30)) <= 10 + 1e-9 for p in pts)
        validate_cover(sc, sol, 2)

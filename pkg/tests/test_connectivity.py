import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relayplace.connectivity import (
    NodeKind,
    build_topology,
    euclidean_mst,
    is_connected,
    mst_steinerize,
    steiner_count,
)
from relayplace.errors import InvalidArgumentError
from relayplace.geometry import Point, dist

coords = st.tuples(st.floats(0, 100), st.floats(0, 100)).map(lambda t: Point(*t))


def nx_mst_steiner_total(points, R):
    g = nx.Graph()
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            g.add_edge(i, j, weight=dist(points[i], points[j]))
    tree = nx.minimum_spanning_tree(g)
    weight = sum(d["weight"] for _, _, d in tree.edges(data=True))
    added = sum(max(0, math.ceil(d["weight"] / R - 5e-10) - 1) for _, _, d in tree.edges(data=True))
    return weight, added


class TestTopology:
    def test_example(self):
        g = build_topology([Point(0, 0), Point(15, 0)], Point(100, 100), 20)
        assert [(i, j) for i, j, _ in g.edges] == [(0, 1)]
        assert g.nodes[g.sink_index][1] is NodeKind.SINK
        assert not is_connected(g)

    def test_empty(self):
        g = build_topology([], Point(5, 5), 20)
        assert len(g.nodes) == 1 and is_connected(g)

    def test_threshold(self):
        assert is_connected(build_topology([Point(0, 0)], Point(20, 0), 20))
        assert not is_connected(build_topology([Point(0, 0)], Point(21, 0), 20))

    def test_bad_radius(self):
        with pytest.raises(InvalidArgumentError):
            build_topology([], Point(0, 0), 0)
        with pytest.raises(InvalidArgumentError):
            mst_steinerize([], Point(0, 0), -1)

    @given(st.lists(coords, max_size=15), coords, st.floats(5, 40))
    def test_edges_brute_force(self, relays, sink, R):
        g = build_topology(relays, sink, R)
        pts = [p for p, _ in g.nodes]
        expect = {(i, j) for i in range(len(pts)) for j in range(i + 1, len(pts)) if dist(pts[i], pts[j]) <= R + 1e-9 * max(1, R)}
        assert {(i, j) for i, j, _ in g.edges} == expect
        for i, j, w in g.edges:
            assert w == pytest.approx(dist(pts[i], pts[j]), abs=1e-12)


class TestSteinerize:
    def test_example(self):
        added = mst_steinerize([Point(0, 0), Point(50, 0)], Point(100, 0), 20)
        expect = [(50 / 3, 0), (100 / 3, 0), (50 + 50 / 3, 0), (50 + 100 / 3, 0)]
        assert np.allclose(sorted(added), sorted(expect), atol=1e-9)

    def test_all_within_reach(self):
        assert mst_steinerize([Point(40, 50), Point(60, 55)], Point(50, 50), 20) == []

    @pytest.mark.parametrize("d,k", [(20, 0), (20.0000000001, 0), (20.1, 1), (40, 1), (40.1, 2), (100, 4)])
    def test_count(self, d, k):
        assert steiner_count(d, 20) == k

    @given(st.lists(coords, max_size=25), coords, st.floats(5, 40))
    def test_against_networkx(self, relays, sink, R):
        nodes = list(relays) + [sink]
        tree = euclidean_mst(nodes)
        weight, added = nx_mst_steiner_total(nodes, R)
        assert sum(w for _, _, w in tree) == pytest.approx(weight, rel=1e-9, abs=1e-9)
        extra = mst_steinerize(relays, sink, R)
        assert len(extra) == added
        assert is_connected(build_topology(relays, sink, R, steiner=extra))

    def test_points_on_segments(self, rng):
        relays = [Point(*p) for p in rng.uniform(0, 100, (30, 2))]
        sink = Point(50, 50)
        nodes = relays + [sink]
        extra = mst_steinerize(relays, sink, 10)
        segs = [(nodes[i], nodes[j]) for i, j, w in euclidean_mst(nodes) if w > 10]
        for p in extra:
            assert any(abs(dist(a, p) + dist(p, b) - dist(a, b)) < 1e-9 for a, b in segs)

    def test_permutation_invariant_count(self, rng):
        relays = [Point(*p) for p in rng.uniform(0, 100, (40, 2))]
        base = len(mst_steinerize(relays, Point(50, 50), 20))
        for _ in range(5):
            perm = [relays[i] for i in rng.permutation(len(relays))]
            assert len(mst_steinerize(perm, Point(50, 50), 20)) == base

    def test_tie_breaking(self):
        # a unit square: four equal edges, Kruskal keeps the lowest index pairs
        pts = [Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)]
        assert [(i, j) for i, j, _ in euclidean_mst(pts)] == [(0, 1), (0, 3), (1, 2)]

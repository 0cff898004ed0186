"""High-tier topology over relays and the sink, and MST steinerisation."""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError
from .geometry import Point, tolerance


class NodeKind(enum.Enum):
    RELAY = "Relay"
    SINK = "Sink"
    STEINER = "Steiner"


@dataclass(frozen=True)
class TopologyGraph:
    nodes: tuple[tuple[Point, NodeKind], ...]
    edges: tuple[tuple[int, int, float], ...]
    comm_radius: float

    @property
    def sink_index(self) -> int:
        return next(i for i, (_, k) in enumerate(self.nodes) if k is NodeKind.SINK)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.nodes]
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj


def _pairwise(points: Sequence[Point]) -> np.ndarray:
    a = np.asarray(points, dtype=float).reshape(-1, 2)
    return np.hypot(a[:, None, 0] - a[None, :, 0], a[:, None, 1] - a[None, :, 1])


def _check_R(R: float) -> None:
    if not R > 0:
        raise InvalidArgumentError(f"R must be positive, got {R}")


def build_topology(
    relays: Sequence[Point],
    sink: Point,
    R: float,
    steiner: Sequence[Point] = (),
) -> TopologyGraph:
    """Unit-disk graph over relays, then the sink, then any Steiner points."""
    _check_R(R)
    nodes = (
        [(Point(*p), NodeKind.RELAY) for p in relays]
        + [(Point(*sink), NodeKind.SINK)]
        + [(Point(*p), NodeKind.STEINER) for p in steiner]
    )
    d = _pairwise([p for p, _ in nodes])
    ii, jj = np.nonzero(np.triu(d <= R + tolerance(R), k=1))
    edges = tuple((int(i), int(j), float(d[i, j])) for i, j in zip(ii, jj))
    return TopologyGraph(tuple(nodes), edges, R)


def is_connected(graph: TopologyGraph) -> bool:
    """True when every node is reachable from the sink."""
    start = graph.sink_index
    adj = graph.adjacency()
    seen = [False] * len(graph.nodes)
    seen[start] = True
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                queue.append(v)
    return all(seen)


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def euclidean_mst(points: Sequence[Point]) -> list[tuple[int, int, float]]:
    """Kruskal over the complete graph; ties by (weight, smaller endpoint, larger endpoint)."""
    n = len(points)
    if n < 2:
        return []
    d = _pairwise(points)
    ii, jj = np.triu_indices(n, k=1)
    w = d[ii, jj]
    order = np.lexsort((jj, ii, w))
    ds = _DisjointSet(n)
    tree = []
    for k in order:
        i, j = int(ii[k]), int(jj[k])
        if ds.union(i, j):
            tree.append((i, j, float(w[k])))
            if len(tree) == n - 1:
                break
    return tree


def steiner_count(length: float, R: float) -> int:
    """Relays needed inside an edge of ``length`` so no hop exceeds R."""
    if length <= R + tolerance(R):
        return 0
    return math.ceil(length / R - 5e-10) - 1


def mst_steinerize(relays: Sequence[Point], sink: Point, R: float) -> list[Point]:
    """Connectivity relays placed evenly along every MST edge longer than R.

    The MST spans the relays and the sink.
    """
    _check_R(R)
    nodes = [Point(*p) for p in relays] + [Point(*sink)]
    added: list[Point] = []
    for i, j, length in euclidean_mst(nodes):
        k = steiner_count(length, R)
        a, b = nodes[i], nodes[j]
        for t in range(1, k + 1):
            f = t / (k + 1)
            added.append(Point(a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)))
    return added

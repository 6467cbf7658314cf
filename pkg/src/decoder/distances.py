"""Cached shortest-path lookups on decoding graphs."""

from __future__ import annotations

import math
from collections.abc import Hashable, Iterable

import networkx as nx


class GraphDistances:
    """Dijkstra from each source at most once; ``boundary`` nodes all count as the boundary.

    Edges without a ``weight`` attribute weigh 1, so the same class serves the
    weighted nest and the hop-count stabilizer graphs.
    """

    def __init__(self, g: nx.Graph, boundary: Iterable[Hashable]):
        self.g = g
        self.boundary = sorted(boundary, key=str)
        self._dist: dict[Hashable, dict] = {}
        self._paths: dict[Hashable, dict] = {}

    def _from(self, u: Hashable) -> None:
        if u not in self._dist:
            if u not in self.g:
                self._dist[u], self._paths[u] = {u: 0.0}, {u: [u]}
            else:
                self._dist[u], self._paths[u] = nx.single_source_dijkstra(self.g, u, weight="weight")

    def pair(self, u: Hashable, v: Hashable) -> float:
        self._from(u)
        return float(self._dist[u].get(v, math.inf))

    def nearest_boundary(self, u: Hashable) -> tuple[float, Hashable | None]:
        self._from(u)
        best: tuple[float, Hashable | None] = (math.inf, None)
        for b in self.boundary:
            d = self._dist[u].get(b)
            if d is not None and d < best[0]:
                best = (float(d), b)
        return best

    def to_boundary(self, u: Hashable) -> float:
        return self.nearest_boundary(u)[0]

    def path(self, u: Hashable, v: Hashable) -> list:
        self._from(u)
        return list(self._paths[u][v])

"""Minimum-weight perfect matching of detection events, with boundary copies."""

from __future__ import annotations

import math
from collections.abc import Hashable, Sequence
from dataclasses import dataclass
from typing import Protocol

import networkx as nx

from src.errors import DisconnectedEventError, InvalidParameterError

# Integer weights keep the blossom algorithm exact.
_SCALE = 1_000_000
BRUTE_FORCE_LIMIT = 12


class Distances(Protocol):
    def pair(self, u: Hashable, v: Hashable) -> float: ...

    def to_boundary(self, u: Hashable) -> float: ...


@dataclass(frozen=True)
class Matching:
    """Event pairs; a ``None`` partner means the event is matched to the boundary."""

    pairs: tuple[tuple[Hashable, Hashable | None], ...]
    weight: float

    @property
    def boundary_matched(self) -> list[Hashable]:
        return [a for a, b in self.pairs if b is None]


def _guard(events: Sequence[Hashable], dist: Distances) -> None:
    for i, a in enumerate(events):
        if math.isfinite(dist.to_boundary(a)):
            continue
        if any(math.isfinite(dist.pair(a, b)) for j, b in enumerate(events) if j != i):
            continue
        raise DisconnectedEventError(f"event {a} has no path to another event or a boundary")


def mwpm(events: Sequence[Hashable], dist: Distances) -> Matching:
    """Exact matching over events plus one boundary copy per event.

    Boundary copies are joined to each other at zero cost, so any subset of
    events can go to the boundary. Costs become ``big - cost`` for
    ``networkx.max_weight_matching`` with maximum cardinality, which makes
    the maximum-weight perfect matching the minimum-cost one.
    """
    events = list(events)
    if not events:
        return Matching((), 0.0)
    _guard(events, dist)
    n = len(events)
    costs: dict[tuple[tuple[str, int], tuple[str, int]], int] = {}
    for i in range(n):
        for j in range(i + 1, n):
            d = dist.pair(events[i], events[j])
            if math.isfinite(d):
                costs[(("e", i), ("e", j))] = round(d * _SCALE)
        db = dist.to_boundary(events[i])
        if math.isfinite(db):
            costs[(("e", i), ("b", i))] = round(db * _SCALE)
        for j in range(i + 1, n):
            costs[(("b", i), ("b", j))] = 0
    big = max(costs.values()) + 1
    g = nx.Graph()
    for (u, v), c in costs.items():
        g.add_edge(u, v, weight=big - c)
    mate = nx.max_weight_matching(g, maxcardinality=True)
    pairs: list[tuple[Hashable, Hashable | None]] = []
    total = 0.0
    covered = set()
    for u, v in mate:
        if u[0] == "b" and v[0] == "b":
            continue
        if u[0] == "b":
            u, v = v, u
        i = u[1]
        if v[0] == "b":
            pairs.append((events[i], None))
            total += dist.to_boundary(events[i])
            covered.add(i)
        else:
            j = v[1]
            a, b = (i, j) if i < j else (j, i)
            pairs.append((events[a], events[b]))
            total += dist.pair(events[a], events[b])
            covered.update((i, j))
    if len(covered) != n:
        stranded = [events[i] for i in set(range(n)) - covered]
        raise DisconnectedEventError(f"no perfect matching covers events {stranded}")
    pairs.sort(key=lambda p: (str(p[0]), str(p[1])))
    return Matching(tuple(pairs), total)


def brute_force_matching(events: Sequence[Hashable], dist: Distances) -> Matching:
    """Exhaustive minimum matching; an oracle for small event sets."""
    events = list(events)
    if len(events) > BRUTE_FORCE_LIMIT:
        raise InvalidParameterError(f"brute force is limited to {BRUTE_FORCE_LIMIT} events, got {len(events)}")

    def best(rest: tuple[int, ...]) -> tuple[float, list[tuple[int, int | None]]]:
        if not rest:
            return 0.0, []
        a, tail = rest[0], rest[1:]
        cost, chosen = math.inf, []
        db = dist.to_boundary(events[a])
        if math.isfinite(db):
            sub, pairs = best(tail)
            cost, chosen = db + sub, [(a, None), *pairs]
        for k, b in enumerate(tail):
            d = dist.pair(events[a], events[b])
            if not math.isfinite(d):
                continue
            sub, pairs = best(tail[:k] + tail[k + 1 :])
            if d + sub < cost:
                cost, chosen = d + sub, [(a, b), *pairs]
        return cost, chosen

    total, chosen = best(tuple(range(len(events))))
    if not math.isfinite(total):
        raise DisconnectedEventError("events cannot be perfectly matched")
    pairs = [(events[a], None if b is None else events[b]) for a, b in chosen]
    pairs.sort(key=lambda p: (str(p[0]), str(p[1])))
    return Matching(tuple(pairs), total)


def greedy_matching(events: Sequence[Hashable], dist: Distances) -> Matching:
    """Cheapest-first pairing; a baseline that never beats ``mwpm``."""
    events = list(events)
    _guard(events, dist)
    options: list[tuple[float, int, int]] = []
    for i in range(len(events)):
        options.append((dist.to_boundary(events[i]), i, -1))
        for j in range(i + 1, len(events)):
            options.append((dist.pair(events[i], events[j]), i, j))
    options.sort()
    used: set[int] = set()
    pairs: list[tuple[Hashable, Hashable | None]] = []
    total = 0.0
    for d, i, j in options:
        if not math.isfinite(d) or i in used or (j >= 0 and j in used):
            continue
        used.add(i)
        if j >= 0:
            used.add(j)
            pairs.append((events[i], events[j]))
        else:
            pairs.append((events[i], None))
        total += d
    if len(used) != len(events):
        raise DisconnectedEventError("greedy pass left events unmatched")
    pairs.sort(key=lambda p: (str(p[0]), str(p[1])))
    return Matching(tuple(pairs), total)

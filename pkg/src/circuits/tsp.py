"""Open-path traveling salesman over ancilla sites."""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence

EXACT_LIMIT = 12


def path_cost(dist: Sequence[Sequence[float]], order: Sequence[int]) -> float:
    return float(sum(dist[a][b] for a, b in zip(order, order[1:])))


def held_karp_open_path(dist: Sequence[Sequence[float]]) -> tuple[float, list[int]]:
    """Exact shortest Hamiltonian path with free endpoints.

    Bitmask dynamic program over states ``(visited mask, last node)``; every
    node may start a path, which is the same as adding a zero-cost dummy
    start to the closed-tour formulation.
    """
    n = len(dist)
    if n == 0:
        return 0.0, []
    if n == 1:
        return 0.0, [0]
    best: dict[tuple[int, int], tuple[float, int]] = {}
    for k in range(n):
        best[(1 << k, k)] = (0.0, -1)
    for size in range(2, n + 1):
        for subset in itertools.combinations(range(n), size):
            mask = 0
            for v in subset:
                mask |= 1 << v
            for u in subset:
                prev_mask = mask ^ (1 << u)
                cost, parent = math.inf, -1
                for v in subset:
                    if v == u or (prev_mask, v) not in best:
                        continue
                    c = best[(prev_mask, v)][0] + dist[v][u]
                    if c < cost:
                        cost, parent = c, v
                if parent >= 0:
                    best[(mask, u)] = (cost, parent)
    full = (1 << n) - 1
    end = min(range(n), key=lambda u: best.get((full, u), (math.inf, -1))[0])
    total = best[(full, end)][0]
    order = [end]
    mask, u = full, end
    while True:
        parent = best[(mask, u)][1]
        if parent < 0:
            break
        mask ^= 1 << u
        u = parent
        order.append(u)
    order.reverse()
    return total, order


def brute_force_open_path(dist: Sequence[Sequence[float]]) -> tuple[float, list[int]]:
    n = len(dist)
    if n == 0:
        return 0.0, []
    best = min(itertools.permutations(range(n)), key=lambda p: path_cost(dist, p))
    return path_cost(dist, best), list(best)


def nearest_neighbor_two_opt(dist: Sequence[Sequence[float]]) -> tuple[float, list[int]]:
    """Heuristic for large sets: best nearest-neighbour path over all starts, then 2-opt."""
    n = len(dist)
    candidates = []
    for start in range(n):
        order = [start]
        left = set(range(n)) - {start}
        while left:
            nxt = min(left, key=lambda v: (dist[order[-1]][v], v))
            order.append(nxt)
            left.remove(nxt)
        candidates.append(order)
    order = min(candidates, key=lambda o: path_cost(dist, o))
    improved = True
    while improved:
        improved = False
        for i in range(n - 1):
            for j in range(i + 2, n + 1):
                trial = order[:i] + order[i:j][::-1] + order[j:]
                if path_cost(dist, trial) < path_cost(dist, order):
                    order = trial
                    improved = True
    return path_cost(dist, order), order


def solve_open_path(dist: Sequence[Sequence[float]]) -> tuple[float, list[int], bool]:
    """Return ``(cost, order, heuristic)``; exact up to ``EXACT_LIMIT`` nodes."""
    if len(dist) <= EXACT_LIMIT:
        cost, order = held_karp_open_path(dist)
        return cost, order, False
    cost, order = nearest_neighbor_two_opt(dist)
    return cost, order, True

"""Per-stabilizer syndrome-extraction circuits with SWAP-routed ancillae."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any

import networkx as nx

from src.circuits.tsp import solve_open_path
from src.errors import UncoverableStabilizerError
from src.lattice.layout import StabilizerLayout, StabilizerSpec
from src.lattice.model import Lattice
from src.pauli import CliffordGate, GateKind, cnot, h, init, measure, swap

logger = logging.getLogger(__name__)

# Past this many candidate sets of one size the cover search turns greedy.
COVER_COMBINATION_CAP = 50_000


class Tag:
    INIT = "init"
    H = "h"
    GATHER = "gather"
    SWAP_OUT = "swap_out"
    SWAP_IN = "swap_in"
    SWAP_BACK = "swap_back"
    MEASURE = "measure"
    WAIT = "wait"


@dataclass(frozen=True)
class GateEvent:
    """A gate placed in a time slot; ``tag`` names its role inside the circuit."""

    gate: CliffordGate
    slot: int
    tag: str = ""

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.gate.qubits

    def shifted(self, offset: int) -> GateEvent:
        return GateEvent(self.gate, self.slot + offset, self.tag)

    def to_dict(self) -> dict[str, Any]:
        return {"slot": self.slot, **self.gate.to_dict(), "tag": self.tag}

    @classmethod
    def from_dict(cls, data: dict) -> GateEvent:
        return cls(CliffordGate.from_dict(data), int(data["slot"]), str(data.get("tag", "")))


@dataclass
class StabilizerCircuit:
    stabilizer: StabilizerSpec
    events: list[GateEvent]
    depth: int
    ancilla_path: tuple[int, ...]
    cover: tuple[int, ...] = ()
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def kind(self) -> str:
        return self.stabilizer.kind

    @property
    def qubits(self) -> set[int]:
        return {q for e in self.events for q in e.qubits}

    def gather_member(self, event: GateEvent) -> int | None:
        """Data qubit a gather CNOT collects (control for Z, target for X)."""
        if event.tag != Tag.GATHER:
            return None
        return event.qubits[0] if self.kind == "Z" else event.qubits[1]

    def slots(self) -> list[list[GateEvent]]:
        out: list[list[GateEvent]] = [[] for _ in range(self.depth)]
        for e in self.events:
            out[e.slot].append(e)
        return out


def working_graph(lattice: Lattice) -> nx.DiGraph:
    """Working sites joined to their working neighbours.

    Successors are inserted E, S, W, N so breadth-first searches break ties
    the same way on every run.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(s for s in range(lattice.n_sites) if lattice.is_working(s))
    for u in list(graph.nodes):
        graph.add_edges_from((u, v) for v in lattice.neighbors(u) if lattice.is_working(v))
    return graph


def _covers(lattice: Lattice, s: StabilizerSpec) -> tuple[list[tuple[int, ...]], bool]:
    """All minimum-size ancilla sets touching every member, or one greedy set."""
    reach = {a: {q for q in lattice.neighbors(a) if q in s.data_members} for a in sorted(s.ancilla_pool)}
    reach = {a: m for a, m in reach.items() if m}
    missing = sorted(set(s.data_members).difference(*reach.values()))
    if missing:
        raise UncoverableStabilizerError(f"{s.kind} stabilizer at {s.home}: no working ancilla next to {missing}")
    pool = sorted(reach)
    for k in range(1, len(pool) + 1):
        if math.comb(len(pool), k) > COVER_COMBINATION_CAP:
            break
        found = [c for c in itertools.combinations(pool, k) if set().union(*(reach[a] for a in c)) == s.data_members]
        if found:
            return found, False
    logger.warning("cover search for stabilizer at %s fell back to greedy", s.home)
    left, chosen = set(s.data_members), []
    while left:
        best = max(pool, key=lambda a: (len(reach[a] & left), -a))
        chosen.append(best)
        left -= reach[best]
    return [tuple(sorted(chosen))], True


def _plan_route(lattice: Lattice, s: StabilizerSpec) -> tuple[tuple[int, ...], list[int], float, dict[str, Any]]:
    covers, greedy_cover = _covers(lattice, s)
    graph = working_graph(lattice)
    paths: dict[int, dict[int, list[int]]] = {}
    candidates: list[tuple[float, tuple[int, ...]]] = []
    heuristic_tsp = False
    for cover in covers:
        for a in cover:
            if a not in paths:
                paths[a] = nx.single_source_shortest_path(graph, a)
        if any(b not in paths[a] for a in cover for b in cover):
            continue
        dist = [[len(paths[a][b]) - 1 for b in cover] for a in cover]
        cost, order, heuristic = solve_open_path(dist)
        heuristic_tsp = heuristic_tsp or heuristic
        path = tuple(cover[i] for i in order)
        candidates.append((cost, path))
        candidates.append((cost, path[::-1]))
    if not candidates:
        raise UncoverableStabilizerError(f"{s.kind} stabilizer at {s.home}: covering ancillae are disconnected")
    best_cost = min(c[0] for c in candidates)
    stops = max(path for cost, path in candidates if cost == best_cost)
    route = [stops[0]]
    for a, b in zip(stops, stops[1:]):
        route.extend(paths[a][b][1:])
    meta = {"heuristic_cover": greedy_cover, "heuristic_tsp": heuristic_tsp, "route_cost": best_cost}
    if heuristic_tsp:
        logger.warning("TSP for stabilizer at %s used the nearest-neighbour heuristic", s.home)
    return stops, route, best_cost, meta


def _gather(kind: str, member: int, anc: int) -> CliffordGate:
    return cnot(member, anc) if kind == "Z" else cnot(anc, member)


def compose_stabilizer_circuit(layout: StabilizerLayout, s: StabilizerSpec) -> StabilizerCircuit:
    """Build the circuit that measures ``s`` with one travelling ancilla.

    The ancilla starts at the first site of the shortest route through a
    minimum covering set of ancilla sites. At every ancilla site on the route
    it gathers the adjacent members not yet gathered, in site order, except
    that the member it is about to step into comes last. Stepping through a
    data site D from P to N is ``SWAP(P, D)``, ``SWAP(D, N)``, then ``SWAP(P, D)``
    puts the data value back; D stays locked until it has. Every gate takes
    its own slot.
    """
    if not s.data_members:
        raise UncoverableStabilizerError(f"{s.kind} stabilizer at {s.home} has no data members")
    lattice = layout.lattice
    stops, route, _, meta = _plan_route(lattice, s)

    events: list[GateEvent] = []

    def emit(gate: CliffordGate, tag: str) -> None:
        events.append(GateEvent(gate, len(events), tag))

    anc = route[0]
    emit(init(anc), Tag.INIT)
    if s.kind == "X":
        emit(h(anc), Tag.H)

    gathered: set[int] = set()
    i = 0
    while i < len(route):
        site = route[i]
        nxt = route[i + 1] if i + 1 < len(route) else None
        todo = sorted(q for q in lattice.neighbors(site) if q in s.data_members and q not in gathered)
        if nxt in todo:
            todo.remove(nxt)
            todo.append(nxt)
        for q in todo:
            emit(_gather(s.kind, q, site), Tag.GATHER)
            gathered.add(q)
        if nxt is None:
            break
        # Route sites alternate ancilla, data, ancilla.
        after = route[i + 2]
        emit(swap(site, nxt), Tag.SWAP_OUT)
        emit(swap(nxt, after), Tag.SWAP_IN)
        emit(swap(site, nxt), Tag.SWAP_BACK)
        i += 2

    last = route[-1]
    if s.kind == "X":
        emit(h(last), Tag.H)
    emit(measure(last), Tag.MEASURE)

    missed = set(s.data_members) - gathered
    if missed:
        raise UncoverableStabilizerError(f"route for stabilizer at {s.home} never reached {sorted(missed)}")
    meta.update({"cover_size": len(stops)})
    return StabilizerCircuit(
        stabilizer=s,
        events=events,
        depth=len(events),
        ancilla_path=tuple(route),
        cover=tuple(stops),
        metadata=meta,
    )


def compose_all(layout: StabilizerLayout) -> list[StabilizerCircuit]:
    """Circuits for every stabilizer of the layout, in layout order."""
    return [compose_stabilizer_circuit(layout, s) for s in layout.stabilizers]


def measured_gate(c: StabilizerCircuit) -> GateEvent:
    return next(e for e in c.events if e.gate.kind is GateKind.MEASURE)

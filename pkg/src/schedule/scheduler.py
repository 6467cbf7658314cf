"""Weave stabilizer circuits into one asynchronous whole circuit."""

from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass, field
from typing import Any

from src.circuits.compose import StabilizerCircuit, Tag
from src.errors import HorizonError, InvalidParameterError
from src.lattice.layout import StabilizerLayout
from src.pauli import CliffordGate, GateKind, idle

logger = logging.getLogger(__name__)

# What an instance needs from a qubit at one step.
_GATHER_DATA = "gather_data"
_HOLD = "hold"


@dataclass(frozen=True)
class ScheduledEvent:
    gate: CliffordGate
    slot: int
    stabilizer_id: int
    instance: int
    tag: str = ""

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.gate.qubits

    @property
    def is_wait(self) -> bool:
        return self.tag == Tag.WAIT

    def to_dict(self) -> dict[str, Any]:
        return {
            "slot": self.slot,
            **self.gate.to_dict(),
            "stabilizer_id": self.stabilizer_id,
            "instance": self.instance,
            "tag": self.tag,
        }

    @classmethod
    def from_dict(cls, data: dict) -> ScheduledEvent:
        return cls(
            CliffordGate.from_dict(data),
            int(data["slot"]),
            int(data["stabilizer_id"]),
            int(data.get("instance", -1)),
            str(data.get("tag", "")),
        )


@dataclass
class Instance:
    """One execution of one stabilizer circuit inside the whole circuit."""

    stabilizer_id: int
    kind: str
    start: int
    end: int
    measure_slot: int
    events: list[ScheduledEvent]
    gather_times: dict[int, int] = field(default_factory=dict)
    waits: int = 0
    restarts: int = 0


@dataclass
class WholeCircuit:
    circuits: list[StabilizerCircuit]
    horizon: int
    instances: list[Instance]
    n_qubits: int
    layout: StabilizerLayout | None = None
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def events(self) -> list[ScheduledEvent]:
        out = [e for inst in self.instances for e in inst.events]
        out.sort(key=lambda e: (e.slot, e.instance, e.qubits))
        return out

    @property
    def slots(self) -> dict[tuple[int, int], ScheduledEvent]:
        """``(qubit, step) -> event``."""
        return {(q, e.slot): e for e in self.events for q in e.qubits}

    def measurements(self, stabilizer_id: int) -> list[int]:
        return sorted(i.measure_slot for i in self.instances if i.stabilizer_id == stabilizer_id)

    def instances_of(self, stabilizer_id: int) -> list[Instance]:
        return sorted((i for i in self.instances if i.stabilizer_id == stabilizer_id), key=lambda i: i.start)

    def cycle_stats(self) -> dict[int, float]:
        """Mean steps between consecutive measurements, for stabilizers measured at least twice."""
        out = {}
        for sid in range(len(self.circuits)):
            m = self.measurements(sid)
            if len(m) >= 2:
                out[sid] = (m[-1] - m[0]) / (len(m) - 1)
        return out

    def correction_boundaries(self) -> list[int]:
        per = [self.measurements(sid) for sid in range(len(self.circuits))]
        bounds = [0]
        while True:
            nxt = 0
            for m in per:
                i = bisect.bisect_left(m, bounds[-1])
                if i == len(m):
                    return bounds
                nxt = max(nxt, m[i] + 1)
            bounds.append(nxt)

    def z_measurements_per_step(self) -> float:
        total = sum(1 for i in self.instances if i.kind == "Z")
        return total / self.horizon if self.horizon else 0.0


def priority_order(circuits: list[StabilizerCircuit]) -> list[int]:
    """Deepest first; ties go to the stabilizer whose smallest site comes first in row-major order."""
    return sorted(range(len(circuits)), key=lambda i: (-circuits[i].depth, min(circuits[i].qubits), i))


def default_horizon(layout: StabilizerLayout, circuits: list[StabilizerCircuit], cycles: int | None = None) -> int:
    """Step at which the ``cycles``-th correction round completes, ``d + 2`` rounds by default.

    A trial schedule is grown until it holds one round more than asked for,
    so the last round counted is never cut short by the trial horizon.
    """
    rounds = layout.lattice.distance + 2 if cycles is None else cycles
    if rounds < 1:
        raise InvalidParameterError(f"need at least one correction round, got {rounds}")
    steps = rounds * 2 * max(c.depth for c in circuits)
    while True:
        try:
            bounds = schedule(circuits, max_steps=steps, layout=layout).correction_boundaries()
        except HorizonError:
            bounds = []
        if len(bounds) > rounds + 1:
            logger.debug("horizon of %d rounds is %d steps (trial %d)", rounds, bounds[rounds], steps)
            return bounds[rounds]
        steps *= 2


class _SlotTable:
    """Slot occupancy plus the bookkeeping each placement attempt needs."""

    def __init__(self, circuits: list[StabilizerCircuit], layout: StabilizerLayout | None = None):
        self.circuits = circuits
        if layout is not None:
            self.data_sites = frozenset(layout.lattice.data_sites)
        else:
            self.data_sites = frozenset(q for c in circuits for q in c.stabilizer.data_members)
        self.cells: dict[tuple[int, int], int] = {}
        self.instances: list[Instance] = []
        # data qubit -> sorted gather slots, and slot -> instance index
        self.gather_slots: dict[int, list[int]] = {}
        self.gather_owner: dict[tuple[int, int], int] = {}
        self.max_span = 0

    def _opposite_gathers(self, q: int, kind: str, t0: int) -> list[tuple[int, int]]:
        slots = self.gather_slots.get(q, [])
        lo = bisect.bisect_left(slots, t0 - self.max_span - 1)
        out = []
        for tj in slots[lo:]:
            j = self.gather_owner[(q, tj)]
            other = self.instances[j]
            if other.kind != kind and other.end >= t0:
                out.append((j, tj))
        return out

    def attempt(self, sid: int, t0: int) -> Instance | int:
        """Place one instance starting at ``t0``; return it, or the step to restart from."""
        c = self.circuits[sid]
        groups = c.slots()
        inst_id = len(self.instances)
        held: set[int] = set()
        events: list[ScheduledEvent] = []
        claimed: set[tuple[int, int]] = set()
        gather_times: dict[int, int] = {}
        relation: dict[int, str] = {}
        waits = 0
        measure_slot = -1
        t = t0
        k = 0
        while k < len(groups):
            group = groups[k]
            need: dict[int, str] = {q: _HOLD for q in held}
            for e in group:
                member = c.gather_member(e)
                for q in e.qubits:
                    need[q] = _GATHER_DATA if q == member else _HOLD

            wait = False
            for q, kind in need.items():
                owner = self.cells.get((q, t))
                if owner is None:
                    continue
                # A gather, or a data qubit this instance is not carrying, can wait
                # for the other circuit; the syndrome carrier cannot.
                if kind == _GATHER_DATA or (q in self.data_sites and q not in held):
                    wait = True
                else:
                    return self.instances[owner].end + 1

            fresh: dict[int, str] = {}
            if not wait:
                for e in group:
                    member = c.gather_member(e)
                    if member is None:
                        continue
                    for j, tj in self._opposite_gathers(member, c.kind, t0):
                        rel = "J" if tj < t else "I"
                        prev = relation.get(j, fresh.get(j))
                        if prev is None:
                            fresh[j] = rel
                        elif prev != rel:
                            if prev == "J":
                                # Their access must come first; let it pass.
                                wait = True
                            else:
                                return t0 + 1

            if wait:
                for q in sorted(held):
                    events.append(ScheduledEvent(idle(q), t, sid, inst_id, Tag.WAIT))
                    claimed.add((q, t))
                waits += 1
                t += 1
                continue

            relation.update(fresh)
            claimed.update((q, t) for q in need)
            for e in group:
                events.append(ScheduledEvent(e.gate, t, sid, inst_id, e.tag))
                member = c.gather_member(e)
                if member is not None:
                    gather_times[member] = t
                self._update_held(held, e.gate, e.tag)
                if e.gate.kind is GateKind.MEASURE:
                    measure_slot = t
            t += 1
            k += 1

        inst = Instance(sid, c.kind, t0, t - 1, measure_slot, events, gather_times, waits)
        self._commit(inst, claimed)
        return inst

    @staticmethod
    def _update_held(held: set[int], gate: CliffordGate, tag: str) -> None:
        if gate.kind is GateKind.INIT:
            held.add(gate.qubits[0])
        elif tag == Tag.SWAP_OUT:
            held.add(gate.qubits[1])
        elif tag == Tag.SWAP_IN:
            held.add(gate.qubits[1])
        elif tag == Tag.SWAP_BACK:
            held.difference_update(gate.qubits)
        elif gate.kind is GateKind.MEASURE:
            held.discard(gate.qubits[0])

    def _commit(self, inst: Instance, claimed: set[tuple[int, int]]) -> None:
        idx = len(self.instances)
        self.instances.append(inst)
        for cell in claimed:
            self.cells[cell] = idx
        for q, tq in inst.gather_times.items():
            bisect.insort(self.gather_slots.setdefault(q, []), tq)
            self.gather_owner[(q, tq)] = idx
        self.max_span = max(self.max_span, inst.end - inst.start + 1)

    def place(self, sid: int, t0: int) -> Instance:
        restarts = 0
        while True:
            result = self.attempt(sid, t0)
            if isinstance(result, Instance):
                result.restarts = restarts
                return result
            restarts += 1
            t0 = result


def schedule(
    circuits: list[StabilizerCircuit],
    max_steps: int | None = None,
    layout: StabilizerLayout | None = None,
) -> WholeCircuit:
    """Build the whole circuit up to ``max_steps`` time steps.

    The deepest stabilizer is placed once at step 0 and every other stabilizer
    once after it. Each round then lets the others catch up to one depth of
    the deepest before its ceiling, places the deepest at its ceiling, and
    places again every other stabilizer that finished at or before the old
    ceiling. An instance blocked on a data qubit it is not carrying waits with
    identity gates on the sites it holds; a clash on a held syndrome carrier,
    an ancilla or an initialisation restarts it after the blocker finishes.
    Stabilizers of opposite type that share data qubits gather them in the
    same relative order. Instances that would end past the horizon are cut.
    """
    if not circuits:
        raise InvalidParameterError("nothing to schedule")
    if max_steps is None:
        if layout is None:
            raise InvalidParameterError("max_steps is required without a layout")
        max_steps = default_horizon(layout, circuits)
    if max_steps <= 0:
        raise InvalidParameterError(f"max_steps must be positive, got {max_steps}")

    order = priority_order(circuits)
    deepest, rest = order[0], order[1:]
    table = _SlotTable(circuits, layout)
    ceil = {sid: 0 for sid in order}
    lead = circuits[deepest].depth
    whole_ceil = ceil[deepest] = table.place(deepest, 0).end + 1
    for sid in rest:
        ceil[sid] = table.place(sid, 0).end + 1
    while whole_ceil <= max_steps:
        for sid in rest:
            if ceil[sid] <= whole_ceil - lead:
                ceil[sid] = table.place(sid, ceil[sid]).end + 1
        ceil[deepest] = table.place(deepest, whole_ceil).end + 1
        while any(ceil[sid] <= whole_ceil for sid in rest):
            for sid in rest:
                if ceil[sid] <= whole_ceil:
                    ceil[sid] = table.place(sid, ceil[sid]).end + 1
        whole_ceil = ceil[deepest]

    kept = [inst for inst in table.instances if inst.end < max_steps]
    # Renumber so event.instance indexes WholeCircuit.instances.
    renumbered = []
    for new_id, inst in enumerate(sorted(kept, key=lambda i: (i.start, i.stabilizer_id))):
        events = [ScheduledEvent(e.gate, e.slot, e.stabilizer_id, new_id, e.tag) for e in inst.events]
        renumbered.append(
            Instance(
                inst.stabilizer_id,
                inst.kind,
                inst.start,
                inst.end,
                inst.measure_slot,
                events,
                inst.gather_times,
                inst.waits,
                inst.restarts,
            )
        )
    counts = {sid: 0 for sid in order}
    for inst in renumbered:
        counts[inst.stabilizer_id] += 1
    missing = [sid for sid, n in counts.items() if n == 0]
    if missing:
        raise HorizonError(f"{max_steps} steps do not fit one measurement of stabilizers {missing}")

    n_qubits = layout.lattice.n_sites if layout is not None else 1 + max(q for c in circuits for q in c.qubits)
    logger.info(
        "scheduled %d instances of %d stabilizers over %d steps (%d waits, %d restarts)",
        len(renumbered),
        len(circuits),
        max_steps,
        sum(i.waits for i in renumbered),
        sum(i.restarts for i in renumbered),
    )
    return WholeCircuit(
        circuits=circuits,
        horizon=max_steps,
        instances=renumbered,
        n_qubits=n_qubits,
        layout=layout,
        metadata={"priority": order, "instances_per_stabilizer": counts},
    )

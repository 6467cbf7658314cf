"""Symbolic replay: which operator does a composed circuit actually measure?"""

from __future__ import annotations

from src.circuits.compose import GateEvent, StabilizerCircuit, measured_gate
from src.errors import AlgebraTraceError
from src.pauli import GateKind, PauliString, conjugate

_UNITARY = (GateKind.H, GateKind.CNOT, GateKind.SWAP)


def back_propagate(
    events: list[GateEvent], measured_qubit: int, measure_slot: int, init_slot: int, n: int
) -> PauliString:
    """Heisenberg-walk ``Z`` on ``measured_qubit`` from ``measure_slot`` back to just after ``init_slot``.

    Gates sharing the measurement slot act on other qubits and are skipped.
    Every gate in the set is self-inverse, so walking back is plain
    conjugation slot by slot.
    """
    by_slot: dict[int, list[GateEvent]] = {}
    for e in events:
        if init_slot < e.slot < measure_slot and e.gate.kind in _UNITARY:
            by_slot.setdefault(e.slot, []).append(e)
    op = PauliString.from_sparse(n, {measured_qubit: "Z"})
    for t in sorted(by_slot, reverse=True):
        for e in by_slot[t]:
            op = conjugate(op, e.gate)
    return op


def strip_initialized(op: PauliString, q: int) -> PauliString:
    """Drop the component on a freshly initialized ``|0>`` qubit; it must be I or Z."""
    if op.x_bits[q]:
        raise AlgebraTraceError(f"measured operator carries {op.letter(q)} on initialized qubit {q}")
    z = op.z_bits.copy()
    z[q] = False
    return PauliString(op.x_bits, z, op.phase)


def replay_stabilizer_circuit(c: StabilizerCircuit, n: int) -> PauliString:
    meas = measured_gate(c)
    start = next(e for e in c.events if e.gate.kind is GateKind.INIT)
    op = back_propagate(c.events, meas.qubits[0], meas.slot, start.slot, n)
    return strip_initialized(op, start.qubits[0])


def data_returns_home(c: StabilizerCircuit, data_sites: set[int] | frozenset[int]) -> bool:
    """True if every data value moved by a SWAP is back on its own site at the end."""
    holder = {q: q for q in c.qubits}
    for e in sorted(c.events, key=lambda e: e.slot):
        if e.gate.kind is GateKind.SWAP:
            a, b = e.qubits
            holder[a], holder[b] = holder[b], holder[a]
    return all(holder[q] == q for q in c.qubits if q in data_sites)


def verify_circuit(c: StabilizerCircuit, n: int, data_sites: set[int] | frozenset[int]) -> bool:
    measured = replay_stabilizer_circuit(c, n)
    return measured == c.stabilizer.operator(n) and data_returns_home(c, data_sites)


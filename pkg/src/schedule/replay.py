"""Check that every scheduled instance still measures its declared stabilizer."""

from __future__ import annotations

import logging

from src.circuits.compose import GateEvent
from src.circuits.replay import back_propagate, strip_initialized
from src.errors import AlgebraTraceError
from src.pauli import GateKind, PauliString
from src.schedule.scheduler import Instance, WholeCircuit

logger = logging.getLogger(__name__)


def measured_operator(w: WholeCircuit, inst: Instance, events: list[GateEvent] | None = None) -> PauliString:
    """Operator the instance's measurement reports, referred back to the step after its INIT.

    Every gate of every instance between the two steps is walked through, so
    interleaving with neighbours shows up as extra support.
    """
    if events is None:
        events = [GateEvent(e.gate, e.slot, e.tag) for e in w.events]
    meas = next(e for e in inst.events if e.gate.kind is GateKind.MEASURE)
    start = next(e for e in inst.events if e.gate.kind is GateKind.INIT)
    window = [e for e in events if start.slot < e.slot < meas.slot]
    op = back_propagate(window, meas.qubits[0], meas.slot, start.slot, w.n_qubits)
    return strip_initialized(op, start.qubits[0])


def verify_whole_circuit(w: WholeCircuit) -> list[int]:
    """Indices of instances whose measured operator differs from the declared one."""
    events = [GateEvent(e.gate, e.slot, e.tag) for e in w.events]
    bad = []
    for idx, inst in enumerate(w.instances):
        declared = w.circuits[inst.stabilizer_id].stabilizer.operator(w.n_qubits)
        try:
            ok = measured_operator(w, inst, events) == declared
        except AlgebraTraceError:
            ok = False
        if not ok:
            logger.warning("instance %d of stabilizer %d measures the wrong operator", idx, inst.stabilizer_id)
            bad.append(idx)
    return bad


def no_double_booking(w: WholeCircuit) -> bool:
    seen: set[tuple[int, int]] = set()
    for e in w.events:
        for q in e.qubits:
            if (q, e.slot) in seen:
                return False
            seen.add((q, e.slot))
    return True

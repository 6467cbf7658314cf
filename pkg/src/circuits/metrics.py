"""Size metrics of single stabilizer circuits."""

from __future__ import annotations

from src.circuits.compose import StabilizerCircuit


def circuit_kq(c: StabilizerCircuit) -> int:
    """Distinct qubits touched times depth."""
    if not c.events:
        return 0
    return len(c.qubits) * c.depth


def circuit_kdq(c: StabilizerCircuit) -> int:
    """Data members times depth."""
    if not c.events:
        return 0
    return len(c.stabilizer.data_members) * c.depth

"""Pauli algebra, Clifford conjugation and the stabilizer tableau."""

from src.pauli.frame import PauliFrame
from src.pauli.gates import CliffordGate, GateKind, cnot, conjugate, conjugate_bits, h, idle, init, measure, swap
from src.pauli.pauli import PauliString, commutes, multiply, product
from src.pauli.tableau import (
    StabilizerTableau,
    apply_gate,
    apply_pauli,
    decompose,
    reset_qubit,
    symplectic_rank,
    tableau_contains,
    tableau_measure,
)

__all__ = [
    "CliffordGate",
    "GateKind",
    "PauliFrame",
    "PauliString",
    "StabilizerTableau",
    "apply_gate",
    "apply_pauli",
    "cnot",
    "commutes",
    "conjugate",
    "conjugate_bits",
    "decompose",
    "h",
    "idle",
    "init",
    "measure",
    "multiply",
    "product",
    "reset_qubit",
    "swap",
    "symplectic_rank",
    "tableau_contains",
    "tableau_measure",
]

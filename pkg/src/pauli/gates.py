"""Clifford gate set and Heisenberg conjugation rules."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.errors import DimensionMismatchError, InvalidGateError
from src.pauli.pauli import PauliString


class GateKind(str, Enum):
    INIT = "INIT"
    H = "H"
    CNOT = "CNOT"
    SWAP = "SWAP"
    MEASURE = "MEASURE"
    IDENTITY = "I"

    @property
    def arity(self) -> int:
        return 2 if self in (GateKind.CNOT, GateKind.SWAP) else 1


@dataclass(frozen=True)
class CliffordGate:
    """One gate; CNOT qubits are ``(control, target)``."""

    kind: GateKind
    qubits: tuple[int, ...]

    def __post_init__(self) -> None:
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qubits)
        if len(qubits) != kind.arity:
            raise InvalidGateError(f"{kind.value} takes {kind.arity} qubit(s), got {qubits}")
        if kind.arity == 2 and qubits[0] == qubits[1]:
            raise InvalidGateError(f"{kind.value} needs two distinct qubits, got {qubits}")

    def to_dict(self) -> dict[str, object]:
        return {"gate": self.kind.value, "qubits": list(self.qubits)}

    @classmethod
    def from_dict(cls, data: dict) -> CliffordGate:
        return cls(GateKind(data["gate"]), tuple(data["qubits"]))

    def __str__(self) -> str:
        return f"{self.kind.value}({','.join(map(str, self.qubits))})"


def init(q: int) -> CliffordGate:
    return CliffordGate(GateKind.INIT, (q,))


def h(q: int) -> CliffordGate:
    return CliffordGate(GateKind.H, (q,))


def cnot(control: int, target: int) -> CliffordGate:
    return CliffordGate(GateKind.CNOT, (control, target))


def swap(a: int, b: int) -> CliffordGate:
    return CliffordGate(GateKind.SWAP, (a, b))


def measure(q: int) -> CliffordGate:
    return CliffordGate(GateKind.MEASURE, (q,))


def idle(q: int) -> CliffordGate:
    return CliffordGate(GateKind.IDENTITY, (q,))


def conjugate(p: PauliString, g: CliffordGate) -> PauliString:
    """Return ``g p g^dagger``.

    INIT, MEASURE and IDENTITY act as the identity here; their effect on
    stabilizer groups is handled by the tableau and by the noise engine.
    """
    if max(g.qubits) >= p.n:
        raise DimensionMismatchError(f"{g} does not fit a {p.n}-qubit Pauli string")
    x = p.x_bits.copy()
    z = p.z_bits.copy()
    flip = False
    if g.kind is GateKind.H:
        (q,) = g.qubits
        flip = bool(x[q] and z[q])
        x[q], z[q] = z[q], x[q]
    elif g.kind is GateKind.CNOT:
        c, t = g.qubits
        flip = bool(x[c] and z[t] and not (x[t] ^ z[c]))
        x[t] ^= x[c]
        z[c] ^= z[t]
    elif g.kind is GateKind.SWAP:
        a, b = g.qubits
        x[a], x[b] = x[b], x[a]
        z[a], z[b] = z[b], z[a]
    else:
        return p
    return PauliString(x, z, p.phase + (2 if flip else 0))


def conjugate_bits(x: np.ndarray, z: np.ndarray, g: CliffordGate) -> None:
    """Phase-free in-place propagation of frame bits; arrays may carry a leading batch axis."""
    if g.kind is GateKind.H:
        (q,) = g.qubits
        tmp = x[..., q].copy()
        x[..., q] = z[..., q]
        z[..., q] = tmp
    elif g.kind is GateKind.CNOT:
        c, t = g.qubits
        x[..., t] ^= x[..., c]
        z[..., c] ^= z[..., t]
    elif g.kind is GateKind.SWAP:
        a, b = g.qubits
        x[..., [a, b]] = x[..., [b, a]]
        z[..., [a, b]] = z[..., [b, a]]

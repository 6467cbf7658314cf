"""Circuit-level Pauli error model and per-location channels."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.errors import InvalidParameterError
from src.pauli import GateKind, PauliString
from src.utils.seeding import as_rng

ONE_QUBIT_PAULIS = ("X", "Y", "Z")
# IX, IY, ..., ZZ: every nontrivial two-qubit Pauli, first letter on the first gate qubit.
TWO_QUBIT_PAULIS = tuple(a + b for a, b in itertools.product("IXYZ", repeat=2) if a + b != "II")

_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


class Preset(str, Enum):
    LATTICE = "lattice"
    PURIFICATION = "purification"


@dataclass(frozen=True)
class ErrorModel:
    """Probabilities of the Pauli channels attached to each kind of location.

    ``one_qubit`` and ``memory`` are totals split evenly over X, Y and Z;
    ``two_qubit`` is split over the fifteen nontrivial two-qubit Paulis.
    INIT and MEASURE draw from ``init_paulis``/``measure_paulis`` with the
    total split evenly; the lattice preset flips X only. ``idle`` decides
    whether explicit wait gates carry memory error.
    """

    p: float
    one_qubit: float
    two_qubit: float
    init: float
    measure: float
    memory: float = 0.0
    init_paulis: str = "X"
    measure_paulis: str = "X"
    idle: bool = False
    name: str = Preset.LATTICE.value

    def __post_init__(self) -> None:
        for label in ("p", "one_qubit", "two_qubit", "init", "measure", "memory"):
            v = getattr(self, label)
            if not 0.0 <= v <= 1.0:
                raise InvalidParameterError(f"{label} probability must be in [0, 1], got {v}")
        for label in ("init_paulis", "measure_paulis"):
            letters = getattr(self, label)
            if not letters or any(ch not in "XYZ" for ch in letters):
                raise InvalidParameterError(f"{label} must be a non-empty subset of 'XYZ', got {letters!r}")

    @classmethod
    def lattice(cls, p: float, idle: bool = False) -> ErrorModel:
        """Gate errors p/3 and p/15, X flip with probability p at INIT and MEASURE, no idle error by default."""
        return cls(p=p, one_qubit=p, two_qubit=p, init=p, measure=p, memory=p if idle else 0.0, idle=idle)

    @classmethod
    def purification(cls, p: float) -> ErrorModel:
        """Memory, one-qubit gates, INIT and measurement all see X, Y, Z at p/3 each."""
        return cls(
            p=p,
            one_qubit=p,
            two_qubit=p,
            init=p,
            measure=p,
            memory=p,
            init_paulis="XYZ",
            measure_paulis="XYZ",
            idle=True,
            name=Preset.PURIFICATION.value,
        )

    @classmethod
    def from_preset(cls, preset: Preset | str, p: float, idle: bool = False) -> ErrorModel:
        preset = Preset(preset)
        if preset is Preset.PURIFICATION:
            return cls.purification(p)
        return cls.lattice(p, idle=idle)

    def scaled(self, p: float) -> ErrorModel:
        """Same preset at a different physical rate."""
        return ErrorModel.from_preset(self.name, p, idle=self.idle)

    def channel(self, kind: GateKind | str, wait: bool = False) -> tuple[tuple[str, ...], float]:
        """``(paulis, probability of each)`` for a location of this gate kind."""
        kind = GateKind(kind)
        if kind is GateKind.CNOT or kind is GateKind.SWAP:
            return TWO_QUBIT_PAULIS, self.two_qubit / 15
        if kind is GateKind.INIT:
            return tuple(self.init_paulis), self.init / len(self.init_paulis)
        if kind is GateKind.MEASURE:
            return tuple(self.measure_paulis), self.measure / len(self.measure_paulis)
        if kind is GateKind.IDENTITY:
            if wait and not self.idle:
                return (), 0.0
            return ONE_QUBIT_PAULIS, self.memory / 3
        return ONE_QUBIT_PAULIS, self.one_qubit / 3


def pauli_table(paulis: tuple[str, ...]) -> np.ndarray:
    """``(K, arity, 2)`` array of (x, z) bits for a channel's Pauli list."""
    if not paulis:
        return np.zeros((0, 1, 2), dtype=bool)
    return np.array([[_BITS[ch] for ch in label] for label in paulis], dtype=bool)


def sample_channel(
    kind: GateKind | str,
    m: ErrorModel,
    rng: np.random.Generator | int | None = None,
    wait: bool = False,
) -> PauliString:
    """Draw the error a location of ``kind`` suffers, as a Pauli string on the gate's qubits."""
    kind = GateKind(kind)
    paulis, each = m.channel(kind, wait=wait)
    u = as_rng(rng).random()
    if not paulis or u >= each * len(paulis):
        return PauliString.identity(kind.arity)
    return PauliString.from_label(paulis[min(int(u // each), len(paulis) - 1)])


def draw_indices(u: np.ndarray, each: float, k: int) -> np.ndarray:
    """Vectorised channel draw: -1 for no error, else the index into the Pauli list."""
    if k == 0 or each <= 0.0:
        return np.full(u.shape, -1, dtype=np.int64)
    idx = np.minimum((u // each).astype(np.int64), k - 1)
    return np.where(u < each * k, idx, -1)

"""Pauli frames: classical X/Z correction bits kept in software."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from src.errors import DimensionMismatchError
from src.pauli.pauli import PauliString


@dataclass
class PauliFrame:
    """Pending X and Z corrections per qubit; composition is XOR."""

    x: np.ndarray
    z: np.ndarray

    @classmethod
    def empty(cls, n: int) -> PauliFrame:
        return cls(np.zeros(n, dtype=bool), np.zeros(n, dtype=bool))

    @property
    def n(self) -> int:
        return int(self.x.shape[0])

    def flip(self, letter: str, qubits: Iterable[int]) -> None:
        idx = list(qubits)
        if letter in ("X", "Y"):
            self.x[idx] ^= True
        if letter in ("Z", "Y"):
            self.z[idx] ^= True

    def compose(self, other: PauliFrame) -> PauliFrame:
        if other.n != self.n:
            raise DimensionMismatchError(f"frames cover {self.n} and {other.n} qubits")
        return PauliFrame(self.x ^ other.x, self.z ^ other.z)

    def apply(self, p: PauliString) -> PauliString:
        """Multiply the frame into ``p``; phase is irrelevant for error tracking and dropped."""
        if p.n != self.n:
            raise DimensionMismatchError(f"frame covers {self.n} qubits, Pauli string {p.n}")
        return PauliString(p.x_bits ^ self.x, p.z_bits ^ self.z)

    def to_pauli(self) -> PauliString:
        return PauliString(self.x, self.z)

    @property
    def is_identity(self) -> bool:
        return not (self.x.any() or self.z.any())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliFrame):
            return NotImplemented
        return bool(np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z))

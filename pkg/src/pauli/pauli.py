"""Pauli strings in symplectic form with full phase tracking."""

from __future__ import annotations

from collections.abc import Iterable, Mapping

import numpy as np

from src.errors import DimensionMismatchError, InvalidParameterError

# Operator = i**phase * (tensor of sigma_j), sigma_j in {I, X, Y, Z} picked by (x_j, z_j).
_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _LETTERS.items()}
_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}


def _frozen(bits: np.ndarray) -> np.ndarray:
    out = np.asarray(bits, dtype=bool).copy()
    out.setflags(write=False)
    return out


class PauliString:
    """An n-qubit Pauli operator ``i**phase * sigma_0 (x) ... (x) sigma_{n-1}``.

    ``phase`` is an exponent of ``i`` in ``0..3``; ``Y`` is the Hermitian Pauli,
    so ``X * Z == -iY``. Instances are immutable and hashable.
    """

    __slots__ = ("x_bits", "z_bits", "phase")

    x_bits: np.ndarray
    z_bits: np.ndarray
    phase: int

    def __init__(self, x_bits: Iterable[int] | np.ndarray, z_bits: Iterable[int] | np.ndarray, phase: int = 0):
        x = _frozen(np.fromiter(x_bits, dtype=bool) if not isinstance(x_bits, np.ndarray) else x_bits)
        z = _frozen(np.fromiter(z_bits, dtype=bool) if not isinstance(z_bits, np.ndarray) else z_bits)
        if x.shape != z.shape or x.ndim != 1:
            raise DimensionMismatchError(f"x_bits and z_bits must be equal-length vectors, got {x.shape} vs {z.shape}")
        object.__setattr__(self, "x_bits", x)
        object.__setattr__(self, "z_bits", z)
        object.__setattr__(self, "phase", int(phase) % 4)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("PauliString is immutable")

    # -- construction -----------------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(np.zeros(n, dtype=bool), np.zeros(n, dtype=bool))

    @classmethod
    def from_label(cls, label: str) -> PauliString:
        """Parse labels like ``"XIZ"``, ``"-YY"`` or ``"+iXZ"`` (qubit 0 first)."""
        s = label.strip()
        phase = 0
        if s.startswith("+i") or s.startswith("-i"):
            phase = 1 if s[0] == "+" else 3
            s = s[2:]
        elif s[:1] in ("+", "-"):
            phase = 0 if s[0] == "+" else 2
            s = s[1:]
        try:
            bits = [_BITS[ch] for ch in s.upper()]
        except KeyError as e:
            raise InvalidParameterError(f"Bad Pauli label {label!r}") from e
        x = np.array([b[0] for b in bits], dtype=bool)
        z = np.array([b[1] for b in bits], dtype=bool)
        return cls(x, z, phase)

    @classmethod
    def from_sparse(cls, n: int, ops: Mapping[int, str], phase: int = 0) -> PauliString:
        """Build from ``{qubit: "X"|"Y"|"Z"}``."""
        x = np.zeros(n, dtype=bool)
        z = np.zeros(n, dtype=bool)
        for q, letter in ops.items():
            if not 0 <= q < n:
                raise DimensionMismatchError(f"qubit {q} out of range for n={n}")
            bx, bz = _BITS[letter.upper()]
            x[q], z[q] = bool(bx), bool(bz)
        return cls(x, z, phase)

    @classmethod
    def on(cls, n: int, letter: str, qubits: Iterable[int], phase: int = 0) -> PauliString:
        """Same Pauli letter on every listed qubit, e.g. ``Z^{(x) members}``."""
        return cls.from_sparse(n, {q: letter for q in qubits}, phase)

    # -- views ------------------------------------------------------------------------

    @property
    def n(self) -> int:
        return int(self.x_bits.shape[0])

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x_bits | self.z_bits))

    @property
    def support(self) -> list[int]:
        return [int(q) for q in np.flatnonzero(self.x_bits | self.z_bits)]

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian strings."""
        if not self.is_hermitian:
            raise InvalidParameterError(f"{self} has an imaginary phase")
        return 1 if self.phase == 0 else -1

    def letter(self, q: int) -> str:
        return _LETTERS[(int(self.x_bits[q]), int(self.z_bits[q]))]

    def to_label(self) -> str:
        body = "".join(self.letter(q) for q in range(self.n))
        return _PHASE_PREFIX[self.phase] + body

    def to_matrix(self) -> np.ndarray:
        """Dense 2**n matrix (qubit 0 is the most significant factor); for small n only."""
        mats = {
            "I": np.eye(2, dtype=complex),
            "X": np.array([[0, 1], [1, 0]], dtype=complex),
            "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
            "Z": np.array([[1, 0], [0, -1]], dtype=complex),
        }
        out = np.array([[1]], dtype=complex)
        for q in range(self.n):
            out = np.kron(out, mats[self.letter(q)])
        return (1j**self.phase) * out

    # -- algebra ----------------------------------------------------------------------

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)

    def __neg__(self) -> PauliString:
        return PauliString(self.x_bits, self.z_bits, self.phase + 2)

    def with_phase(self, phase: int) -> PauliString:
        return PauliString(self.x_bits, self.z_bits, phase)

    def commutes_with(self, other: PauliString) -> bool:
        return commutes(self, other)

    def same_operator(self, other: PauliString) -> bool:
        """Equality ignoring phase."""
        return bool(np.array_equal(self.x_bits, other.x_bits) and np.array_equal(self.z_bits, other.z_bits))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return self.phase == other.phase and self.same_operator(other)

    def __hash__(self) -> int:
        return hash((self.phase, np.packbits(self.x_bits).tobytes(), np.packbits(self.z_bits).tobytes(), self.n))

    def __repr__(self) -> str:
        return f"PauliString({self.to_label()!r})"


def _check_dims(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise DimensionMismatchError(f"Pauli strings act on {a.n} and {b.n} qubits")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Return ``a * b`` with its phase in ``{+1, -1, +i, -i}``."""
    _check_dims(a, b)
    x1 = a.x_bits.astype(np.int64)
    z1 = a.z_bits.astype(np.int64)
    x2 = b.x_bits.astype(np.int64)
    z2 = b.z_bits.astype(np.int64)
    # Exponent of i picked up at each qubit when sigma(x1,z1) * sigma(x2,z2) is reduced.
    g = np.where(
        (x1 == 1) & (z1 == 1),
        z2 - x2,
        np.where(x1 == 1, z2 * (2 * x2 - 1), np.where(z1 == 1, x2 * (1 - 2 * z2), 0)),
    )
    phase = (a.phase + b.phase + int(g.sum())) % 4
    return PauliString(a.x_bits ^ b.x_bits, a.z_bits ^ b.z_bits, phase)


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the symplectic inner product of ``a`` and ``b`` is zero."""
    _check_dims(a, b)
    anti = np.count_nonzero((a.x_bits & b.z_bits) ^ (a.z_bits & b.x_bits))
    return anti % 2 == 0


def product(paulis: Iterable[PauliString], n: int) -> PauliString:
    out = PauliString.identity(n)
    for p in paulis:
        out = multiply(out, p)
    return out

"""Small CSS codes used for encoded Bell pairs: definitions, encoders and lookup decoders."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from src.circuits.compose import GateEvent, Tag
from src.errors import AlgebraTraceError, InvalidParameterError
from src.pauli import (
    CliffordGate,
    GateKind,
    PauliString,
    StabilizerTableau,
    apply_gate,
    cnot,
    commutes,
    h,
    idle,
    init,
    multiply,
    symplectic_rank,
    tableau_contains,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CodeDef:
    """A CSS code with one logical qubit and a non-fault-tolerant encoder.

    ``encoding`` starts with INIT on every wire except ``input_qubit`` in
    slot 0; gate layers follow from slot 1 with explicit identities on the
    wires that wait. ``footprint`` is the qubit count KQ is charged for.
    """

    name: str
    n: int
    generators: tuple[PauliString, ...]
    logical_x: PauliString
    logical_z: PauliString
    encoding: tuple[GateEvent, ...] = ()
    input_qubit: int = 0
    footprint: int = 0

    def __post_init__(self) -> None:
        if not self.footprint:
            object.__setattr__(self, "footprint", self.n)

    @property
    def depth(self) -> int:
        """Gate layers of the encoder; initialization is not counted as a step."""
        return max((e.slot for e in self.encoding), default=0)

    @property
    def kq(self) -> int:
        return self.footprint * self.depth

    @property
    def is_physical(self) -> bool:
        return not self.generators

    def checks(self, letter: str) -> np.ndarray:
        """``(r, n)`` parity checks of the ``letter``-type generators."""
        rows = [g.z_bits if letter == "Z" else g.x_bits for g in self.generators if _kind(g) == letter]
        if not rows:
            return np.zeros((0, self.n), dtype=bool)
        return np.array(rows, dtype=bool)

    @cached_property
    def x_decoder(self) -> LookupDecoder:
        """Corrects X errors from the Z-type checks."""
        return LookupDecoder(self.checks("Z"))

    @cached_property
    def z_decoder(self) -> LookupDecoder:
        """Corrects Z errors from the X-type checks."""
        return LookupDecoder(self.checks("X"))

    def validate(self) -> None:
        for a, b in itertools.combinations(self.generators, 2):
            if not commutes(a, b):
                raise InvalidParameterError(f"{self.name}: generators {a} and {b} anticommute")
        if symplectic_rank(list(self.generators), self.n) != len(self.generators):
            raise InvalidParameterError(f"{self.name}: generators are not independent")
        for g in self.generators:
            if not (commutes(g, self.logical_x) and commutes(g, self.logical_z)):
                raise InvalidParameterError(f"{self.name}: logical operators anticommute with {g}")
        if commutes(self.logical_x, self.logical_z):
            raise InvalidParameterError(f"{self.name}: logical X and Z commute")

    def gate_counts(self) -> tuple[int, int]:
        """``(single-qubit gates, two-qubit gates)`` in the encoder, identities excluded."""
        single = sum(1 for e in self.encoding if e.gate.kind is GateKind.H)
        double = sum(1 for e in self.encoding if e.gate.kind.arity == 2)
        return single, double


def _kind(p: PauliString) -> str:
    if p.x_bits.any() and p.z_bits.any():
        raise InvalidParameterError(f"{p} is not a CSS generator")
    return "X" if p.x_bits.any() else "Z"


class LookupDecoder:
    """Minimum-weight correction for every syndrome of a set of parity checks.

    Patterns are tried in order of weight, then lexicographically, so ties
    resolve the same way on every run.
    """

    def __init__(self, checks: np.ndarray):
        self.checks = np.asarray(checks, dtype=bool)
        r, n = self.checks.shape
        self.n = n
        self.table = np.zeros((2**r, n), dtype=bool)
        found = np.zeros(2**r, dtype=bool)
        found[0] = True
        weights = 2 ** np.arange(r, dtype=np.int64)
        for w in range(1, n + 1):
            if found.all():
                break
            for support in itertools.combinations(range(n), w):
                e = np.zeros(n, dtype=bool)
                e[list(support)] = True
                s = int((self.checks[:, e].sum(axis=1) % 2) @ weights) if r else 0
                if not found[s]:
                    found[s] = True
                    self.table[s] = e
        self._weights = weights

    def syndrome(self, bits: np.ndarray) -> np.ndarray:
        """Integer syndrome for each row of a ``(batch, n)`` error array."""
        bits = np.atleast_2d(np.asarray(bits, dtype=bool))
        if not self.checks.shape[0]:
            return np.zeros(bits.shape[0], dtype=np.int64)
        parity = (bits.astype(np.int64) @ self.checks.T.astype(np.int64)) % 2
        return parity @ self._weights

    def correct(self, bits: np.ndarray) -> np.ndarray:
        """Errors with the looked-up correction applied."""
        bits = np.atleast_2d(np.asarray(bits, dtype=bool))
        return bits ^ self.table[self.syndrome(bits)]


def _layer(gates: list[CliffordGate]) -> list[list[CliffordGate]]:
    """ASAP layering that keeps each wire's gate order."""
    free: dict[int, int] = {}
    layers: list[list[CliffordGate]] = []
    for g in gates:
        k = max((free.get(q, 0) for q in g.qubits), default=0)
        while len(layers) <= k:
            layers.append([])
        layers[k].append(g)
        for q in g.qubits:
            free[q] = k + 1
    return layers


def build_encoding(n: int, input_qubit: int, columns: list[list[CliffordGate]]) -> tuple[GateEvent, ...]:
    """Encoder events, one slot per column; wires without a gate in a column wait."""
    events = [GateEvent(init(q), 0, Tag.INIT) for q in range(n) if q != input_qubit]
    for slot, layer in enumerate(columns, start=1):
        busy = {q for g in layer for q in g.qubits}
        if len(busy) != sum(len(g.qubits) for g in layer):
            raise InvalidParameterError(f"encoder column {slot} uses a qubit twice")
        events.extend(GateEvent(g, slot) for g in layer)
        events.extend(GateEvent(idle(q), slot, Tag.WAIT) for q in range(n) if q not in busy)
    return tuple(events)


def _css(n: int, letter: str, supports: list[tuple[int, ...]]) -> list[PauliString]:
    return [PauliString.on(n, letter, s) for s in supports]


# Columns of the seven-qubit encoder; the input sits on wire 3.
_STEANE_GATES = [
    h(4), h(5), h(6),
    cnot(3, 1), cnot(3, 2),
    cnot(4, 0), cnot(4, 2), cnot(4, 3),
    cnot(5, 0), cnot(5, 1), cnot(5, 3),
    cnot(6, 0), cnot(6, 1), cnot(6, 2),
]  # fmt: skip
_STEANE_SUPPORTS = [(0, 2, 3, 4), (0, 1, 3, 5), (0, 1, 2, 6)]


def steane_code() -> CodeDef:
    """The [[7,1,3]] code; its encoder has depth 6, so KQ is 42."""
    n = 7
    code = CodeDef(
        name="steane",
        n=n,
        generators=tuple(_css(n, "X", _STEANE_SUPPORTS) + _css(n, "Z", _STEANE_SUPPORTS)),
        logical_x=PauliString.on(n, "X", (1, 2, 3)),
        logical_z=PauliString.on(n, "Z", (3, 4, 5)),
        encoding=build_encoding(n, 3, _layer(_STEANE_GATES)),
        input_qubit=3,
    )
    code.validate()
    return code


# Data qubits of the distance-3 planar patch in row-major order:
#   0 . 1 . 2
#   . 3 . 4 .
#   5 . 6 . 7
#   . 8 . 9 .
#  10 . 11 . 12
_SURFACE_X = [(0, 1, 3), (1, 2, 4), (3, 5, 6, 8), (4, 6, 7, 9), (8, 10, 11), (9, 11, 12)]
_SURFACE_Z = [(0, 3, 5), (1, 3, 4, 6), (2, 4, 7), (5, 8, 10), (6, 8, 9, 11), (7, 9, 12)]
# Each X generator owns a corner qubit; those start in |+> and fan out after the
# input has been spread along the logical X column. Ten columns on the 25-qubit patch.
_SURFACE_COLUMNS = [
    [h(0), h(2), h(5), h(7), h(10), h(12)],
    [cnot(6, 1), cnot(0, 3)],
    [cnot(6, 11), cnot(2, 4)],
    [cnot(10, 8), cnot(0, 1)],
    [cnot(12, 9), cnot(5, 6)],
    [cnot(7, 4), cnot(10, 11)],
    [cnot(2, 1), cnot(5, 3)],
    [cnot(7, 9), cnot(12, 11)],
    [cnot(5, 8)],
    [cnot(7, 6)],
]
SURFACE_D3_FOOTPRINT = 25


def surface_d3_code() -> CodeDef:
    """Distance-3 planar code on 13 data qubits; KQ is charged on the 25-qubit patch."""
    n = 13
    code = CodeDef(
        name="surface3",
        n=n,
        generators=tuple(_css(n, "X", _SURFACE_X) + _css(n, "Z", _SURFACE_Z)),
        logical_x=PauliString.on(n, "X", (1, 6, 11)),
        logical_z=PauliString.on(n, "Z", (5, 6, 7)),
        encoding=build_encoding(n, 6, _SURFACE_COLUMNS),
        input_qubit=6,
        footprint=SURFACE_D3_FOOTPRINT,
    )
    code.validate()
    return code


def physical_code() -> CodeDef:
    """A bare qubit: no generators, no encoder."""
    return CodeDef(
        name="physical",
        n=1,
        generators=(),
        logical_x=PauliString.from_label("X"),
        logical_z=PauliString.from_label("Z"),
    )


CODES = {"steane": steane_code, "surface3": surface_d3_code, "physical": physical_code}


def get_code(name: str) -> CodeDef:
    try:
        return CODES[name]()
    except KeyError:
        raise InvalidParameterError(f"unknown code {name!r}; choose from {sorted(CODES)}") from None


@dataclass
class EncoderCheck:
    code: str
    generators_ok: bool
    logicals_ok: bool
    final: StabilizerTableau = field(repr=False)


def verify_encoder(code: CodeDef) -> EncoderCheck:
    """Push the trivial input through the noiseless encoder and compare with the declared code.

    Every declared generator must be in the output group with sign +1 and
    the input's X and Z must arrive as the declared logicals up to the group.
    """
    n = code.n
    gens = [PauliString.from_sparse(n, {q: "Z"}) for q in range(n) if q != code.input_qubit]
    logs = [
        ("X", PauliString.from_sparse(n, {code.input_qubit: "X"})),
        ("Z", PauliString.from_sparse(n, {code.input_qubit: "Z"})),
    ]
    t = StabilizerTableau(n, gens, logs)
    for e in sorted(code.encoding, key=lambda e: e.slot):
        if e.gate.kind in (GateKind.INIT, GateKind.IDENTITY):
            continue
        t = apply_gate(t, e.gate)
    gens_ok = all(tableau_contains(t, g) for g in code.generators)
    logs_ok = tableau_contains(t, multiply(t.logical("X"), code.logical_x)) and tableau_contains(
        t, multiply(t.logical("Z"), code.logical_z)
    )
    if not (gens_ok and logs_ok):
        raise AlgebraTraceError(f"{code.name}: encoder output does not match the declared code")
    logger.debug("%s encoder verified (depth %d, KQ %d)", code.name, code.depth, code.kq)
    return EncoderCheck(code.name, gens_ok, logs_ok, t)

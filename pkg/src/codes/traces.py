"""Tableau walk-throughs of the deformation-based code's lattice operations.

Each trace drives a small stabilizer tableau through a measurement
sequence with every random outcome forced, applies the Pauli fix-up the
protocol prescribes for a -1 result, and checks the stabilizer group
against the expected one after each step. Every combination of forced
outcomes is run and must end in the same group.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from src.errors import AlgebraTraceError, InvalidParameterError
from src.pauli import (
    PauliString,
    StabilizerTableau,
    apply_gate,
    apply_pauli,
    cnot,
    h,
    multiply,
    tableau_contains,
    tableau_measure,
)

logger = logging.getLogger(__name__)


@dataclass
class TraceStep:
    label: str
    outcome: int | None
    generators: list[str]


@dataclass
class TraceReport:
    name: str
    branches: int
    steps: list[TraceStep] = field(default_factory=list)
    final: StabilizerTableau | None = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return self.final is not None


class _Sites:
    """Named qubits mapped onto tableau indices."""

    def __init__(self, names: Sequence[str]):
        self.index = {name: i for i, name in enumerate(names)}
        self.n = len(names)

    def op(self, letter: str, names: str | Sequence[str], sign: int = 1) -> PauliString:
        qubits = [self.index[s] for s in (names.split() if isinstance(names, str) else names)]
        return PauliString.on(self.n, letter, qubits, phase=0 if sign > 0 else 2)


class _Run:
    def __init__(self, name: str, t: StabilizerTableau, outcomes: Sequence[int]):
        self.name = name
        self.t = t
        self.outcomes = list(outcomes)
        self.steps: list[TraceStep] = []

    def measure(self, obs: PauliString, fix: PauliString | None, label: str) -> int:
        forced = self.outcomes.pop(0) if self.outcomes else 1
        outcome, self.t = tableau_measure(self.t, obs, forced_outcome=forced)
        if outcome == -1 and fix is not None:
            self.t = apply_pauli(self.t, fix)
        self.steps.append(TraceStep(label, outcome, [p.to_label() for p in self.t.generators]))
        return outcome

    def expect(self, ops: Sequence[PauliString], label: str) -> None:
        for p in ops:
            if not tableau_contains(self.t, p):
                raise AlgebraTraceError(f"{self.name}: after {label} the group lacks {p.to_label()}")

    def expect_logical(self, name: str, op: PauliString, label: str) -> None:
        try:
            tracked = self.t.logical(name)
        except KeyError:
            raise AlgebraTraceError(f"{self.name}: logical {name} collapsed during {label}") from None
        if not tableau_contains(self.t, multiply(tracked, op)):
            raise AlgebraTraceError(f"{self.name}: after {label} logical {name} is not {op.to_label()}")


def _same_group(a: StabilizerTableau, b: StabilizerTableau) -> bool:
    if a.rank != b.rank:
        return False
    return all(tableau_contains(b, g) for g in a.generators)


def _all_branches(
    name: str,
    n_random: int,
    run: Callable[[Sequence[int]], _Run],
) -> TraceReport:
    reference: _Run | None = None
    for outcomes in itertools.product((1, -1), repeat=n_random):
        r = run(outcomes)
        if reference is None:
            reference = r
        elif not _same_group(r.t, reference.t):
            raise AlgebraTraceError(f"{name}: outcome branch {outcomes} ends in a different stabilizer group")
    assert reference is not None
    logger.debug("%s: %d branches agree", name, 2**n_random)
    return TraceReport(name, 2**n_random, reference.steps, reference.t)


# -- state injection ---------------------------------------------------------------------

_INJECT = _Sites([str(i) for i in range(1, 10)])


def _injection_run(outcomes: Sequence[int]) -> _Run:
    s = _INJECT
    t = StabilizerTableau(
        s.n,
        [s.op("X", "1 2 3 5"), s.op("X", "5 7 8 9"), s.op("Z", "2 4 5 7"), s.op("Z", "3 5 6 8")],
    )
    r = _Run("state injection", t, outcomes)
    r.measure(s.op("X", "5"), s.op("Z", "2 4 5 7"), "measure X5")
    r.expect([s.op("X", "1 2 3"), s.op("X", "7 8 9"), s.op("X", "5"), s.op("Z", "2 3 4 6 7 8")], "measure X5")

    # Rotate qubit 5 to an arbitrary state: X5 leaves the group and becomes the tracked qubit.
    gens = [s.op("X", "1 2 3"), s.op("X", "7 8 9"), s.op("Z", "2 3 4 6 7 8")]
    r.t = StabilizerTableau(s.n, gens, [("Z", s.op("Z", "5")), ("X", s.op("X", "5"))])
    r.t.validate()

    r.measure(s.op("Z", "2 4 5 7"), s.op("X", "1 2 3"), "measure Z2Z4Z5Z7")
    r.measure(s.op("Z", "3 5 6 8"), s.op("X", "1 2 3"), "measure Z3Z5Z6Z8")
    r.expect([s.op("X", "1 2 3 7 8 9"), s.op("Z", "2 4 5 7"), s.op("Z", "3 5 6 8")], "two-defect encoding")
    r.expect_logical("Z", s.op("Z", "5"), "two-defect encoding")
    r.expect_logical("X", s.op("X", "1 2 3 5"), "two-defect encoding")

    r.measure(s.op("X", "5"), s.op("Z", "2 4 5 7"), "merge defects with X5")
    r.expect([s.op("X", "5"), s.op("X", "1 2 3 7 8 9"), s.op("Z", "2 3 4 6 7 8")], "merge defects with X5")
    r.expect_logical("Z", s.op("Z", "2 4 7"), "merge defects with X5")
    r.expect_logical("Z", s.op("Z", "3 6 8"), "merge defects with X5")
    r.expect_logical("X", s.op("X", "1 2 3"), "merge defects with X5")
    return r


def verify_state_injection_trace() -> TraceReport:
    """Inject a raw qubit into a two-defect pair, then merge the defects into one superstabilizer.

    Ends with logical Z on Z2Z4Z7 (equivalently Z3Z6Z8), logical X on X1X2X3
    and the superstabilizer Z2Z3Z4Z6Z7Z8.
    """
    return _all_branches("state injection", 4, _injection_run)


# -- lattice surgery CNOT ----------------------------------------------------------------

_SURGERY = _Sites([*(str(i) for i in range(1, 10)), "S", *"abcdefg"])


def _surgery_run(sign_i: int, sign_t: int, outcomes: Sequence[int]) -> _Run:
    s = _SURGERY
    t = StabilizerTableau(
        s.n,
        [
            s.op("Z", "1 2 3 5 6 7"),
            s.op("X", "2 3 4 5 6 S"),
            s.op("Z", "a b c e f g"),
            s.op("X", "S b c d e f"),
            s.op("Z", "3 8 S b"),
            s.op("Z", "6 9 S e"),
            s.op("Z", "5 6 7", sign_i),
            s.op("Z", "e f g", sign_t),
        ],
    )
    t.validate()
    r = _Run("lattice surgery CNOT", t, outcomes)

    r.measure(s.op("Z", "S"), s.op("X", "2 3 4 5 6 S"), "measure ZS")
    r.expect([s.op("Z", "S"), s.op("X", "2 3 4 5 6 b c d e f"), s.op("Z", "3 8 b"), s.op("Z", "6 9 e")], "measure ZS")

    r.measure(s.op("X", "3"), s.op("Z", "3 8 b"), "measure X3")
    r.expect([s.op("X", "3"), s.op("Z", "1 2 5 6 7 8 b")], "measure X3")

    r.measure(s.op("X", "b"), s.op("Z", "1 2 5 6 7 8 b"), "measure Xb")
    r.expect([s.op("X", "b"), s.op("Z", "1 2 5 6 7 8 a c e f g")], "measure Xb")

    r.measure(s.op("X", "6"), s.op("Z", "1 2 5 6 7 8 a c e f g"), "measure X6")
    r.expect([s.op("X", "6"), s.op("Z", "1 2 5 7 8 9 a c f g"), s.op("Z", "5 7 9 e", sign_i)], "measure X6")

    # A -1 here is the logical XX outcome; its fix lives on the control patch, outside this fragment.
    r.measure(s.op("X", "e"), None, "measure Xe")
    r.expect(
        [s.op("X", "e"), s.op("X", "2 4 5 c d f"), s.op("Z", "5 7 9 f g", sign_i * sign_t)],
        "measure Xe",
    )
    return r


def _abstract_cnot(control: str, target: str, outcomes: Sequence[int]) -> _Run:
    """Three logical qubits C, I, T: measure ZcZi, then XiXt; the merged qubit is (I, T)."""
    s = _Sites(["C", "I", "T"])
    prep = {"0": ("Z", 1), "1": ("Z", -1), "+": ("X", 1), "-": ("X", -1)}
    try:
        gens = [
            s.op(prep[control][0], "C", prep[control][1]),
            s.op("X", "I"),
            s.op(prep[target][0], "T", prep[target][1]),
        ]
    except KeyError as e:
        raise InvalidParameterError(f"inputs must be one of {sorted(prep)}, got {e}") from None
    r = _Run("abstract CNOT", StabilizerTableau(3, gens), outcomes)
    r.measure(s.op("Z", "C I"), s.op("X", "I"), "measure ZcZi")
    r.measure(s.op("X", "I T"), s.op("Z", "C I"), "measure XiXt")
    return r


def _tracked_cnot(outcomes: Sequence[int]) -> _Run:
    s = _Sites(["C", "I", "T"])
    t = StabilizerTableau(
        3,
        [s.op("X", "I")],
        [("XC", s.op("X", "C")), ("ZC", s.op("Z", "C")), ("XT", s.op("X", "T")), ("ZT", s.op("Z", "T"))],
    )
    r = _Run("abstract CNOT", t, outcomes)
    r.measure(s.op("Z", "C I"), s.op("X", "I"), "measure ZcZi")
    r.measure(s.op("X", "I T"), s.op("Z", "C I"), "measure XiXt")
    # CNOT sends Xc -> XcXm and Zm -> ZcZm, where Zm = ZiZt and Xm = Xt.
    r.expect_logical("XC", s.op("X", "C T"), "merge")
    r.expect_logical("ZC", s.op("Z", "C"), "merge")
    r.expect_logical("XT", s.op("X", "T"), "merge")
    r.expect_logical("ZT", s.op("Z", "C I T"), "merge")
    return r


def abstract_cnot_stabilizers(control: str, target: str) -> StabilizerTableau:
    """Final tableau of the three-qubit protocol on stabilizer-state inputs (all branches must agree)."""
    result = _all_branches("abstract CNOT", 2, lambda o: _abstract_cnot(control, target, o))
    return result.final  # type: ignore[return-value]


def verify_lattice_surgery_cnot_trace() -> TraceReport:
    """Merge an intermediate qubit into the target patch for each of the four Z-basis terms.

    The merged logical Z is Z5Z7Z9ZfZg with the product of the two input
    signs, so the target's value is XORed with the control's.
    """
    report = None
    for sign_i, sign_t in itertools.product((1, -1), repeat=2):
        report = _all_branches("lattice surgery CNOT", 4, lambda o, a=sign_i, b=sign_t: _surgery_run(a, b, o))
    _all_branches("abstract CNOT", 2, _tracked_cnot)
    assert report is not None
    return report


# -- ZZ teleportation ---------------------------------------------------------------------

_TELEPORT = _Sites(["q", "b0", "b1", "a"])


def _teleport_run(state: str | None, outcomes: Sequence[int]) -> _Run:
    s = _TELEPORT
    gens = [s.op("X", "b0 b1"), s.op("Z", "b0 b1"), s.op("Z", "a")]
    logs: list[tuple[str, PauliString]] = []
    if state is None:
        logs = [("X", s.op("X", "q")), ("Z", s.op("Z", "q"))]
    else:
        letter, sign = {"0": ("Z", 1), "1": ("Z", -1), "+": ("X", 1), "-": ("X", -1)}[state]
        gens.insert(0, s.op(letter, "q", sign))
    r = _Run("ZZ teleportation", StabilizerTableau(s.n, gens, logs), outcomes)
    r.t = apply_gate(apply_gate(r.t, cnot(0, 3)), cnot(1, 3))
    r.measure(s.op("Z", "a"), s.op("X", "b0 b1"), "measure Za")
    r.measure(s.op("X", "q"), s.op("Z", "b1"), "measure Xq")
    r.measure(s.op("X", "b0"), s.op("Z", "b1"), "measure Xb0")
    if state is None:
        r.expect_logical("X", s.op("X", "b1"), "teleport")
        r.expect_logical("Z", s.op("Z", "b1"), "teleport")
    else:
        letter, sign = {"0": ("Z", 1), "1": ("Z", -1), "+": ("X", 1), "-": ("X", -1)}[state]
        r.expect([s.op(letter, "b1", sign)], "teleport")
    return r


def verify_zz_teleportation_trace(state: str | None = None) -> TraceReport:
    """Send qubit q to b1 through a ZZ check against half of a Bell pair.

    ``state`` picks a stabilizer-state input ("0", "1", "+", "-"); without
    one the logical operators of an arbitrary input are tracked instead.
    """
    if state is not None and state not in ("0", "1", "+", "-"):
        raise InvalidParameterError(f"state must be one of 0, 1, +, -; got {state!r}")
    return _all_branches("ZZ teleportation", 3, lambda o: _teleport_run(state, o))


# -- cat states ----------------------------------------------------------------------------


@dataclass
class CatStateReport:
    n: int
    stabilizers: list[str]
    linear_cycles: int
    circular_cycles: int
    tableau: StabilizerTableau = field(repr=False)


def cat_state_check(n: int, d: int = 3, outcomes: Sequence[int] | None = None) -> CatStateReport:
    """Build an ``n``-qubit cat state with the constant-depth ZZ-ancilla circuit.

    Cat qubits sit on even wires, ancillae between them; each ancilla picks up
    the parity of its two neighbours and is measured, and a -1 flips every cat
    qubit to its right. The result is checked to be stabilized by every
    neighbouring ZZ and by X on all cat qubits. ``d`` only feeds the reported
    proof-cycle counts: ``d`` for a line, ``ceil(d / 2)`` for a loop.
    """
    if n < 2:
        raise InvalidParameterError(f"a cat state needs at least 2 qubits, got {n}")
    wires = 2 * n - 1
    cat = list(range(0, wires, 2))
    anc = list(range(1, wires, 2))
    t = StabilizerTableau(wires, [PauliString.from_sparse(wires, {q: "Z"}) for q in range(wires)])
    for q in cat:
        t = apply_gate(t, h(q))
    for a in anc:
        t = apply_gate(t, cnot(a - 1, a))
    for a in anc:
        t = apply_gate(t, cnot(a + 1, a))
    forced = list(outcomes or [])
    for a in anc:
        outcome, t = tableau_measure(t, PauliString.from_sparse(wires, {a: "Z"}), forced.pop(0) if forced else 1)
        if outcome == -1:
            t = apply_pauli(t, PauliString.on(wires, "X", [q for q in cat if q > a]))

    expected = [PauliString.on(wires, "Z", (q, q + 2)) for q in cat[:-1]]
    expected.append(PauliString.on(wires, "X", cat))
    for p in expected:
        if not tableau_contains(t, p):
            raise AlgebraTraceError(f"cat state of {n} qubits lacks {p.to_label()}")
    return CatStateReport(
        n=n,
        stabilizers=[p.to_label() for p in expected],
        linear_cycles=d,
        circular_cycles=math.ceil(d / 2),
        tableau=t,
    )


def verify_all() -> dict[str, TraceReport | CatStateReport]:
    """Run every algebra trace; raises AlgebraTraceError on the first mismatch."""
    return {
        "state_injection": verify_state_injection_trace(),
        "lattice_surgery_cnot": verify_lattice_surgery_cnot_trace(),
        "zz_teleportation": verify_zz_teleportation_trace(),
        "cat_state": cat_state_check(5, d=5),
    }

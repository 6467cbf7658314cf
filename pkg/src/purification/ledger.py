"""Expected resource cost of one delivered Bell pair."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import asdict, dataclass

from src.codes import CodeDef
from src.errors import InvalidParameterError
from src.pauli import GateKind
from src.purification.pairs import Op, hold_ops


@dataclass(frozen=True)
class ResourceLedger:
    """Raw pairs, qubit-steps (KQ) and gate counts spent per delivered pair."""

    raw_pairs: float = 0.0
    kq: float = 0.0
    single_qubit_gates: float = 0.0
    two_qubit_gates: float = 0.0

    @property
    def inefficiency(self) -> float:
        return self.raw_pairs

    def __add__(self, other: ResourceLedger) -> ResourceLedger:
        return ResourceLedger(
            self.raw_pairs + other.raw_pairs,
            self.kq + other.kq,
            self.single_qubit_gates + other.single_qubit_gates,
            self.two_qubit_gates + other.two_qubit_gates,
        )

    def __sub__(self, other: ResourceLedger) -> ResourceLedger:
        return self + other.scaled(-1)

    def scaled(self, k: float) -> ResourceLedger:
        return ResourceLedger(self.raw_pairs * k, self.kq * k, self.single_qubit_gates * k, self.two_qubit_gates * k)

    def after_round(self, attempt: ResourceLedger, success: float) -> ResourceLedger:
        """Cost of one survivor: two inputs plus the attempt itself, repeated until a round succeeds."""
        if not 0.0 < success <= 1.0:
            raise InvalidParameterError(f"success probability must be in (0, 1], got {success}")
        return (self.scaled(2) + attempt).scaled(1 / success)

    def to_dict(self) -> dict[str, float]:
        return asdict(self)


def ops_ledger(ops: Iterable[Op], qubits: int, raw_pairs: float = 0.0) -> ResourceLedger:
    """Count every gate of a circuit and charge ``qubits`` for every step that holds a non-INIT gate.

    INIT, H, identities and MEASURE are single-qubit gates; CNOT and SWAP are two-qubit gates.
    """
    ops = list(ops)
    steps = {slot for slot, g, _ in ops if g.kind is not GateKind.INIT}
    single = sum(1 for _, g, _ in ops if g.kind.arity == 1)
    double = sum(1 for _, g, _ in ops if g.kind.arity == 2)
    return ResourceLedger(raw_pairs, float(qubits * len(steps)), float(single), float(double))


def encoding_ledger(code: CodeDef) -> ResourceLedger:
    """Encoder cost on the code's whole footprint: every patch qubit holds a gate each step."""
    if code.is_physical:
        return ResourceLedger()
    double = sum(1 for e in code.encoding if e.gate.kind.arity == 2)
    kq = code.kq
    return ResourceLedger(0.0, float(kq), float(kq - 2 * double), float(double))


# Round-0 register timelines of the reference accounting: the pair's creation,
# encoding and the check rounds up to judgment, one gate per qubit-step.
REFERENCE_ROUND_ZERO: dict[tuple[str, str], ResourceLedger] = {
    ("physical", "physical"): ResourceLedger(1.0, 88.0, 86.0, 1.0),
    ("physical", "steane"): ResourceLedger(1.0, 4260.0, 3660.0, 300.0),
    ("physical", "surface3"): ResourceLedger(1.0, 1188.0, 914.0, 137.0),
    ("steane", "surface3"): ResourceLedger(1.0, 5402.0, 4130.0, 636.0),
}


def round_zero_ledger(code_a: CodeDef, code_b: CodeDef, source_ops: Sequence[Op], hold_steps: int) -> ResourceLedger:
    """Cost of one level-0 pair with both halves encoded.

    ``source_ops`` is the creation circuit; its preparation gates come on top of
    the register timeline. Code pairs outside the reference table are counted
    from their circuits: creation and memory on two qubits plus both encoders.
    """
    prep = sum(1 for _, g, held in source_ops if g.kind.arity == 1 and not held)
    reference = REFERENCE_ROUND_ZERO.get(tuple(sorted((code_a.name, code_b.name))))
    if reference is not None:
        return reference + ResourceLedger(single_qubit_gates=float(prep))
    ops = list(source_ops) or hold_ops(2, hold_steps)
    return ops_ledger(ops, 2, raw_pairs=1.0) + encoding_ledger(code_a) + encoding_ledger(code_b)


def recursive_ledger(base: ResourceLedger, attempts: list[ResourceLedger], success: list[float]) -> ResourceLedger:
    """Fold per-round attempt costs and success rates onto the cost of a level-0 pair."""
    if len(attempts) != len(success):
        raise InvalidParameterError(f"{len(attempts)} attempt costs for {len(success)} success rates")
    ledger = base
    for attempt, s in zip(attempts, success):
        ledger = ledger.after_round(attempt, s)
    return ledger

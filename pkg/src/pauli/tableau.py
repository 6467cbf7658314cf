"""Signed stabilizer tableau with logical-operator tracking."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from src.errors import DimensionMismatchError, InvalidObservableError, InvalidParameterError
from src.pauli.gates import CliffordGate, GateKind, conjugate
from src.pauli.pauli import PauliString, commutes, multiply, product

logger = logging.getLogger(__name__)


@dataclass
class StabilizerTableau:
    """Generators of a stabilizer group plus labelled logical operators.

    The tableau may be partial (fewer than ``n`` generators); the remaining
    degrees of freedom are described by ``logicals``, which are updated as
    Heisenberg-picture operators whenever the state changes.
    """

    n: int
    generators: list[PauliString] = field(default_factory=list)
    logicals: list[tuple[str, PauliString]] = field(default_factory=list)

    @classmethod
    def from_labels(cls, generators: list[str], logicals: dict[str, str] | None = None) -> StabilizerTableau:
        gens = [PauliString.from_label(s) for s in generators]
        if not gens:
            raise InvalidParameterError("from_labels needs at least one generator to infer n")
        logs = [(k, PauliString.from_label(v)) for k, v in (logicals or {}).items()]
        t = cls(gens[0].n, gens, logs)
        t.validate()
        return t

    def copy(self) -> StabilizerTableau:
        return StabilizerTableau(self.n, list(self.generators), list(self.logicals))

    def logical(self, label: str) -> PauliString:
        for name, op in self.logicals:
            if name == label:
                return op
        raise KeyError(label)

    @property
    def rank(self) -> int:
        return symplectic_rank(self.generators, self.n)

    @property
    def degrees_of_freedom(self) -> int:
        """``2 ** (n - rank)`` as in the usual qubit counting."""
        return 2 ** (self.n - self.rank)

    def validate(self) -> None:
        for p in self.generators:
            if p.n != self.n:
                raise DimensionMismatchError(f"generator {p} does not act on {self.n} qubits")
        for i, a in enumerate(self.generators):
            for b in self.generators[i + 1 :]:
                if not commutes(a, b):
                    raise InvalidParameterError(f"generators {a} and {b} anticommute")
        if self.rank != len(self.generators):
            raise InvalidParameterError("generators are not independent")
        for name, op in self.logicals:
            for g in self.generators:
                if not commutes(op, g):
                    raise InvalidParameterError(f"logical {name}={op} anticommutes with generator {g}")


def _symplectic_rows(paulis: list[PauliString], n: int) -> np.ndarray:
    if not paulis:
        return np.zeros((0, 2 * n), dtype=np.uint8)
    return np.array([np.concatenate([p.x_bits, p.z_bits]) for p in paulis], dtype=np.uint8)


def _rref(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """GF(2) reduced row echelon form.

    Returns the reduced rows, the combination matrix (row i of the result is
    the XOR of original rows selected by ``comb[i]``) and the pivot columns.
    """
    a = rows.copy() % 2
    k, m = a.shape
    comb = np.eye(k, dtype=np.uint8)
    pivots: list[int] = []
    r = 0
    for col in range(m):
        if r == k:
            break
        hits = np.flatnonzero(a[r:, col])
        if hits.size == 0:
            continue
        piv = r + int(hits[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
            comb[[r, piv]] = comb[[piv, r]]
        for i in np.flatnonzero(a[:, col]):
            if i != r:
                a[i] ^= a[r]
                comb[i] ^= comb[r]
        pivots.append(col)
        r += 1
    return a, comb, pivots


def symplectic_rank(paulis: list[PauliString], n: int) -> int:
    return len(_rref(_symplectic_rows(paulis, n))[2])


def decompose(generators: list[PauliString], target: PauliString) -> np.ndarray | None:
    """Mask of generators whose product equals ``target`` up to phase, or None."""
    n = target.n
    rows = _symplectic_rows(generators, n)
    v = np.concatenate([target.x_bits, target.z_bits]).astype(np.uint8)
    if rows.shape[0] == 0:
        return np.zeros(0, dtype=np.uint8) if not v.any() else None
    reduced, comb, pivots = _rref(rows)
    used = np.zeros(rows.shape[0], dtype=np.uint8)
    for i, col in enumerate(pivots):
        if v[col]:
            v ^= reduced[i]
            used ^= comb[i]
    if v.any():
        return None
    return used


def _group_element(t: StabilizerTableau, p: PauliString) -> PauliString | None:
    mask = decompose(t.generators, p)
    if mask is None:
        return None
    return product((g for g, m in zip(t.generators, mask) if m), t.n)


def tableau_contains(t: StabilizerTableau, p: PauliString) -> bool:
    """True iff ``p`` (with its exact sign) is a product of generators."""
    if p.n != t.n:
        raise DimensionMismatchError(f"{p} does not act on {t.n} qubits")
    elem = _group_element(t, p)
    return elem is not None and elem == p


def tableau_measure(
    t: StabilizerTableau,
    obs: PauliString,
    forced_outcome: int | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[int, StabilizerTableau]:
    """Measure a Hermitian Pauli observable.

    Returns ``(outcome, tableau)`` where outcome is +1 or -1. When ``obs``
    commutes with every generator and lies in the group, the outcome is
    determined and the tableau is returned unchanged. Otherwise the outcome
    is ``forced_outcome`` if given, else drawn from ``rng`` (or +1 without one).
    """
    if obs.n != t.n:
        raise DimensionMismatchError(f"{obs} does not act on {t.n} qubits")
    if not obs.is_hermitian:
        raise InvalidObservableError(f"{obs} is not Hermitian")
    if forced_outcome not in (None, 1, -1):
        raise InvalidParameterError(f"forced outcome must be +1 or -1, got {forced_outcome}")

    anti = [i for i, g in enumerate(t.generators) if not commutes(g, obs)]
    if not anti:
        elem = _group_element(t, obs)
        if elem is not None:
            outcome = 1 if elem.phase == obs.phase else -1
            if forced_outcome is not None and forced_outcome != outcome:
                logger.debug("forced outcome %+d ignored for determined %s", forced_outcome, obs)
            return outcome, t

    if forced_outcome is not None:
        outcome = forced_outcome
    elif rng is not None:
        outcome = 1 if rng.integers(2) == 0 else -1
    else:
        outcome = 1
    signed = obs.with_phase(0 if outcome == 1 else 2)

    gens = list(t.generators)
    logs = list(t.logicals)
    if anti:
        pivot_idx = anti[0]
        pivot = gens[pivot_idx]
        for i in anti[1:]:
            gens[i] = multiply(gens[i], pivot)
        gens[pivot_idx] = signed
        logs = [(name, multiply(op, pivot) if not commutes(op, obs) else op) for name, op in logs]
    else:
        # Independent of the group: this measures a logical degree of freedom.
        gens.append(signed)
        dropped = [name for name, op in logs if not commutes(op, obs)]
        if dropped:
            logger.debug("measurement of %s collapses logicals %s", obs, dropped)
        logs = [(name, op) for name, op in logs if commutes(op, obs)]
    return outcome, StabilizerTableau(t.n, gens, logs)


def apply_gate(t: StabilizerTableau, g: CliffordGate) -> StabilizerTableau:
    """Conjugate every generator and logical by a unitary gate."""
    if g.kind in (GateKind.INIT, GateKind.MEASURE):
        raise InvalidParameterError(f"{g.kind.value} is not unitary; use tableau_measure or reset_qubit")
    return StabilizerTableau(
        t.n,
        [conjugate(p, g) for p in t.generators],
        [(name, conjugate(op, g)) for name, op in t.logicals],
    )


def apply_pauli(t: StabilizerTableau, p: PauliString) -> StabilizerTableau:
    """Apply Pauli ``p`` to the state: anticommuting operators change sign."""
    return StabilizerTableau(
        t.n,
        [g if commutes(g, p) else -g for g in t.generators],
        [(name, op if commutes(op, p) else -op) for name, op in t.logicals],
    )


def reset_qubit(t: StabilizerTableau, q: int, rng: np.random.Generator | None = None) -> StabilizerTableau:
    """Measure ``Z_q`` and flip to +1 if needed: the INIT gate on a tableau."""
    z = PauliString.from_sparse(t.n, {q: "Z"})
    outcome, t2 = tableau_measure(t, z, rng=rng)
    if outcome == -1:
        t2 = apply_pauli(t2, PauliString.from_sparse(t.n, {q: "X"}))
    return t2

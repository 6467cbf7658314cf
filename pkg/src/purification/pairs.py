"""Raw Bell pairs, encoding of pair halves and perfect-extraction judgment.

A batch of pairs is stored as Pauli frames over ``[block A, block B]``:
the frame is the discrepancy from an ideal (encoded) Phi+ pair, so every
circuit is propagated with the same sweep the lattice trials use.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from src.codes import CodeDef, physical_code
from src.errors import DimensionMismatchError, InvalidParameterError
from src.noise import CompiledCircuit, ErrorModel, compile_events, is_noiseless, sweep
from src.pauli import CliffordGate, GateKind, PauliString, cnot, h, idle, init
from src.utils.seeding import as_rng

logger = logging.getLogger(__name__)

# Memory steps each half waits between creation and use.
HOLD_STEPS = 2

# (slot, gate, is_wait)
Op = tuple[int, CliffordGate, bool]


@dataclass(frozen=True)
class RawPairModel:
    """Probabilities of the one-sided discrepancy I, X, Y, Z on half B of Phi+."""

    p_i: float
    p_x: float
    p_y: float
    p_z: float
    name: str = "custom"

    def __post_init__(self) -> None:
        probs = self.probabilities
        if (probs < 0).any() or abs(probs.sum() - 1.0) > 1e-9:
            raise InvalidParameterError(f"discrepancy probabilities must be >= 0 and sum to 1, got {probs.tolist()}")

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([self.p_i, self.p_x, self.p_y, self.p_z], dtype=float)

    @property
    def fidelity(self) -> float:
        return self.p_i

    @classmethod
    def optical(cls) -> RawPairModel:
        """Fidelity 0.85 source: Phi- maps to Z, Psi+ to X and Psi- to Y."""
        return cls(0.85, 0.055, 0.055, 0.04, name="optical")

    @classmethod
    def werner(cls, fidelity: float) -> RawPairModel:
        if not 0.0 <= fidelity <= 1.0:
            raise InvalidParameterError(f"fidelity must be in [0, 1], got {fidelity}")
        rest = (1.0 - fidelity) / 3
        return cls(fidelity, rest, rest, rest, name=f"werner-{fidelity:g}")


@dataclass
class EncodedPairState:
    """A batch of Bell pairs whose halves live in ``code_a`` and ``code_b`` blocks."""

    code_a: CodeDef
    code_b: CodeDef
    x: np.ndarray
    z: np.ndarray
    history: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.x = np.atleast_2d(np.asarray(self.x, dtype=bool))
        self.z = np.atleast_2d(np.asarray(self.z, dtype=bool))
        if self.x.shape != self.z.shape or self.x.shape[1] != self.width:
            raise DimensionMismatchError(
                f"frames {self.x.shape}/{self.z.shape} do not fit blocks of {self.code_a.n}+{self.code_b.n} qubits"
            )

    @classmethod
    def perfect(cls, code_a: CodeDef, code_b: CodeDef, batch: int = 1) -> EncodedPairState:
        empty = np.zeros((batch, code_a.n + code_b.n), dtype=bool)
        return cls(code_a, code_b, empty, empty.copy())

    @classmethod
    def concat(cls, states: Sequence[EncodedPairState]) -> EncodedPairState:
        if not states:
            raise InvalidParameterError("nothing to concatenate")
        first = states[0]
        x = np.concatenate([s.x for s in states])
        z = np.concatenate([s.z for s in states])
        return cls(first.code_a, first.code_b, x, z, list(first.history))

    def __len__(self) -> int:
        return int(self.x.shape[0])

    @property
    def width(self) -> int:
        return self.code_a.n + self.code_b.n

    @property
    def block_a(self) -> slice:
        return slice(0, self.code_a.n)

    @property
    def block_b(self) -> slice:
        return slice(self.code_a.n, self.width)

    def residual(self, i: int = 0) -> PauliString:
        return PauliString(self.x[i], self.z[i])

    def take(self, rows: np.ndarray | slice) -> EncodedPairState:
        return EncodedPairState(self.code_a, self.code_b, self.x[rows], self.z[rows], list(self.history))

    def logical_errors(self) -> tuple[np.ndarray, np.ndarray]:
        """X and Z logical error flags per pair after a perfect syndrome extraction on both blocks."""
        ax, az = _logical_flips(self.code_a, self.x[:, self.block_a], self.z[:, self.block_a])
        bx, bz = _logical_flips(self.code_b, self.x[:, self.block_b], self.z[:, self.block_b])
        return ax ^ bx, az ^ bz


def _logical_flips(code: CodeDef, x: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x_fixed = code.x_decoder.correct(x)
    z_fixed = code.z_decoder.correct(z)
    lx = (x_fixed & code.logical_z.z_bits).sum(axis=1) % 2 == 1
    lz = (z_fixed & code.logical_x.x_bits).sum(axis=1) % 2 == 1
    return lx, lz


@lru_cache(maxsize=64)
def _compiled(ops: tuple[Op, ...], n_qubits: int, m: ErrorModel) -> CompiledCircuit:
    ordered = sorted(ops, key=lambda op: op[0])
    return compile_events(((s, g, w, g.qubits[0]) for s, g, w in ordered), n_qubits, m)


def run_ops(
    ops: Sequence[Op],
    n_qubits: int,
    m: ErrorModel,
    frames: tuple[np.ndarray, np.ndarray],
    rng: np.random.Generator | int | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sweep a short circuit over a batch of starting frames; measurements are numbered in slot order."""
    compiled = _compiled(tuple(ops), n_qubits, m)
    batch = frames[0].shape[0]
    uniforms = None
    if not is_noiseless(m) and batch:
        uniforms = as_rng(rng).random((batch, len(compiled.locations)))
    return sweep(compiled, uniforms, batch, frames=frames)


def hold_ops(n_qubits: int, steps: int, start: int = 1) -> list[Op]:
    return [(start + s, idle(q), True) for s in range(steps) for q in range(n_qubits)]


def hold(state: EncodedPairState, m: ErrorModel, steps: int, rng: np.random.Generator | int | None = None) -> None:
    """Let every qubit of the pairs sit in memory for ``steps`` steps, in place."""
    if steps <= 0 or not len(state):
        return
    _, state.x, state.z = run_ops(hold_ops(state.width, steps), state.width, m, (state.x, state.z), rng)


def make_raw_pair(
    model: RawPairModel,
    batch: int = 1,
    m: ErrorModel | None = None,
    rng: np.random.Generator | int | None = None,
    hold_steps: int = HOLD_STEPS,
) -> EncodedPairState:
    """Draw ``batch`` physical pairs from ``model``; with ``m``, each half then waits ``hold_steps``."""
    gen = as_rng(rng)
    kind = gen.choice(4, size=batch, p=model.probabilities)
    phys = physical_code()
    state = EncodedPairState.perfect(phys, phys, batch)
    state.x[:, 1] = (kind == 1) | (kind == 2)
    state.z[:, 1] = (kind == 2) | (kind == 3)
    state.history.append(f"raw:{model.name}")
    if m is not None:
        hold(state, m, hold_steps, gen)
    return state


def local_gate_ops(hold_steps: int = HOLD_STEPS) -> list[Op]:
    """Two initializations, H on one side with an identity on the other, then a CNOT."""
    ops: list[Op] = [
        (0, init(0), False),
        (0, init(1), False),
        (1, h(0), False),
        (1, idle(1), False),
        (2, cnot(0, 1), False),
    ]
    return ops + hold_ops(2, hold_steps, start=3)


def make_raw_pair_local_gates(
    m: ErrorModel,
    batch: int = 1,
    rng: np.random.Generator | int | None = None,
    hold_steps: int = HOLD_STEPS,
) -> EncodedPairState:
    """Create pairs with the five-location local circuit under ``m``."""
    phys = physical_code()
    state = EncodedPairState.perfect(phys, phys, batch)
    _, state.x, state.z = run_ops(local_gate_ops(hold_steps), 2, m, (state.x, state.z), rng)
    state.history.append("raw:local")
    return state


def encoding_ops(code: CodeDef, offset: int) -> list[Op]:
    return [(e.slot, _shift(e.gate, offset), e.gate.kind is GateKind.IDENTITY) for e in code.encoding]


def _shift(g: CliffordGate, offset: int) -> CliffordGate:
    return CliffordGate(g.kind, tuple(q + offset for q in g.qubits))


def encode_half(
    state: EncodedPairState,
    code: CodeDef,
    side: str,
    m: ErrorModel,
    rng: np.random.Generator | int | None = None,
) -> EncodedPairState:
    """Encode one physical half of every pair into ``code`` with its noisy, non-fault-tolerant encoder.

    The half becomes the encoder's input wire; the other wires start fresh.
    """
    if side not in ("A", "B"):
        raise InvalidParameterError(f"side must be 'A' or 'B', got {side!r}")
    current = state.code_a if side == "A" else state.code_b
    if not current.is_physical:
        raise InvalidParameterError(f"half {side} is already encoded in {current.name}")
    if code.is_physical:
        return state

    code_a, code_b = (code, state.code_b) if side == "A" else (state.code_a, code)
    out = EncodedPairState.perfect(code_a, code_b, len(state))
    src_col = 0 if side == "A" else state.code_a.n
    offset = 0 if side == "A" else code_a.n
    keep = state.block_b if side == "A" else state.block_a
    keep_out = out.block_b if side == "A" else out.block_a
    out.x[:, keep_out] = state.x[:, keep]
    out.z[:, keep_out] = state.z[:, keep]
    out.x[:, offset + code.input_qubit] = state.x[:, src_col]
    out.z[:, offset + code.input_qubit] = state.z[:, src_col]

    _, out.x, out.z = run_ops(encoding_ops(code, offset), out.width, m, (out.x, out.z), rng)
    out.history = [*state.history, f"encode:{side}:{code.name}"]
    logger.debug("encoded %d halves on side %s into %s", len(out), side, code.name)
    return out


@dataclass
class ErrorRates:
    """X, Z and merged logical error rates of a batch of delivered pairs."""

    x: float
    z: float
    merged: float
    pairs: int

    @property
    def stderr(self) -> float:
        if not self.pairs:
            return float("nan")
        return float(np.sqrt(self.merged * (1 - self.merged) / self.pairs))


def judge(state: EncodedPairState) -> ErrorRates:
    """Perfect extraction on both blocks, then compare the pair's logical X and Z correlations."""
    if not len(state):
        return ErrorRates(float("nan"), float("nan"), float("nan"), 0)
    ex, ez = state.logical_errors()
    return ErrorRates(float(ex.mean()), float(ez.mean()), float((ex | ez).mean()), len(state))

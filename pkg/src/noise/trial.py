"""Monte Carlo sweeps of a whole circuit with Pauli frames."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np
from tqdm import tqdm

from src.errors import DimensionMismatchError
from src.noise.model import ErrorModel, draw_indices, pauli_table
from src.pauli import CliffordGate, GateKind, PauliString, conjugate_bits
from src.schedule.scheduler import WholeCircuit
from src.utils.seeding import as_rng, make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Location:
    """One noisy location: the channel after a gate, or before a measurement."""

    index: int
    slot: int
    gate: CliffordGate
    paulis: tuple[str, ...]
    each: float
    table: np.ndarray
    measurement: int = -1

    @property
    def before_gate(self) -> bool:
        return self.gate.kind is GateKind.MEASURE


@dataclass
class CompiledCircuit:
    locations: list[Location]
    n_qubits: int
    measurement_keys: list[tuple[int, int]]
    measurement_slots: list[int]

    @property
    def n_measurements(self) -> int:
        return len(self.measurement_keys)


def compile_events(
    events: Iterable[tuple[int, CliffordGate, bool, int]],
    n_qubits: int,
    m: ErrorModel,
) -> CompiledCircuit:
    """Attach ``m``'s channels to slot-ordered ``(slot, gate, is_wait, key)`` tuples.

    Measurements are numbered in time order; ``measurement_keys[i]`` is
    ``(key, k)`` for the k-th measurement carrying that key.
    """
    locations = []
    keys: list[tuple[int, int]] = []
    slots: list[int] = []
    seen: dict[int, int] = {}
    for i, (slot, gate, is_wait, key) in enumerate(events):
        paulis, each = m.channel(gate.kind, wait=is_wait)
        midx = -1
        if gate.kind is GateKind.MEASURE:
            midx = len(keys)
            k = seen.get(key, 0)
            seen[key] = k + 1
            keys.append((key, k))
            slots.append(slot)
        locations.append(Location(i, slot, gate, paulis, each, pauli_table(paulis), midx))
    return CompiledCircuit(locations, n_qubits, keys, slots)


def compile_circuit(w: WholeCircuit, m: ErrorModel) -> CompiledCircuit:
    """Flatten the whole circuit into noisy locations keyed by stabilizer id."""
    return compile_events(((e.slot, e.gate, e.is_wait, e.stabilizer_id) for e in w.events), w.n_qubits, m)


@dataclass
class TrialState:
    """Residual error and syndrome record of one trial."""

    residual: PauliString
    syndrome_log: dict[int, list[tuple[int, int]]]
    seed_key: tuple[int, ...] = ()


@dataclass
class TrialBatch:
    flips: np.ndarray
    residual_x: np.ndarray
    residual_z: np.ndarray
    compiled: CompiledCircuit
    seed_keys: list[tuple[int, ...]] = field(default_factory=list)

    def __len__(self) -> int:
        return int(self.flips.shape[0])

    def trial(self, i: int) -> TrialState:
        log: dict[int, list[tuple[int, int]]] = {}
        for j, (sid, _) in enumerate(self.compiled.measurement_keys):
            sign = -1 if self.flips[i, j] else 1
            log.setdefault(sid, []).append((self.compiled.measurement_slots[j], sign))
        key = self.seed_keys[i] if i < len(self.seed_keys) else ()
        return TrialState(PauliString(self.residual_x[i], self.residual_z[i]), log, key)

    def __iter__(self):
        return (self.trial(i) for i in range(len(self)))


def _apply_error(x: np.ndarray, z: np.ndarray, loc: Location, u: np.ndarray) -> None:
    idx = draw_indices(u, loc.each, len(loc.paulis))
    rows = np.flatnonzero(idx >= 0)
    if rows.size == 0:
        return
    bits = loc.table[idx[rows]]
    for j, q in enumerate(loc.gate.qubits):
        x[rows, q] ^= bits[:, j, 0]
        z[rows, q] ^= bits[:, j, 1]


def sweep(
    compiled: CompiledCircuit,
    uniforms: np.ndarray | None,
    batch: int,
    injections: dict[int, PauliString] | None = None,
    frames: tuple[np.ndarray, np.ndarray] | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Propagate ``batch`` Pauli frames through the circuit.

    ``uniforms`` holds one draw per (trial, location), or None for a
    noiseless pass. ``frames`` gives starting X and Z bits, which are copied.
    Returns the measurement flips and the final X and Z frames.
    """
    n = compiled.n_qubits
    if frames is None:
        x = np.zeros((batch, n), dtype=bool)
        z = np.zeros((batch, n), dtype=bool)
    else:
        x, z = (np.array(f, dtype=bool) for f in frames)
        if x.shape != (batch, n) or z.shape != (batch, n):
            raise DimensionMismatchError(f"starting frames must be {(batch, n)}, got {x.shape} and {z.shape}")
    flips = np.zeros((batch, compiled.n_measurements), dtype=bool)
    pending = sorted((injections or {}).items())
    for loc in compiled.locations:
        while pending and pending[0][0] <= loc.slot:
            _, err = pending.pop(0)
            x ^= err.x_bits
            z ^= err.z_bits
        g = loc.gate
        u = uniforms[:, loc.index] if uniforms is not None else None
        if g.kind is GateKind.MEASURE:
            (q,) = g.qubits
            if u is not None:
                _apply_error(x, z, loc, u)
            flips[:, loc.measurement] = x[:, q]
            x[:, q] = False
            z[:, q] = False
            continue
        if g.kind is GateKind.INIT:
            (q,) = g.qubits
            x[:, q] = False
            z[:, q] = False
        else:
            conjugate_bits(x, z, g)
        if u is not None:
            _apply_error(x, z, loc, u)
    for _, err in pending:
        x ^= err.x_bits
        z ^= err.z_bits
    return flips, x, z


def is_noiseless(m: ErrorModel) -> bool:
    return m.one_qubit == m.two_qubit == m.init == m.measure == m.memory == 0.0


def run_trial(
    w: WholeCircuit,
    m: ErrorModel,
    rng: np.random.Generator | int | None = None,
    injections: dict[int, PauliString] | None = None,
    compiled: CompiledCircuit | None = None,
) -> TrialState:
    """One trial: every gate is ideal and followed by its channel; measurements are preceded by theirs.

    ``injections`` maps a slot to an extra Pauli applied before that slot's
    gates, for hand-made fault scenarios.
    """
    compiled = compiled or compile_circuit(w, m)
    gen = as_rng(rng)
    uniforms = None if is_noiseless(m) else gen.random((1, len(compiled.locations)))
    flips, x, z = sweep(compiled, uniforms, 1, injections)
    return TrialBatch(flips, x, z, compiled).trial(0)


def simulate(
    w: WholeCircuit,
    m: ErrorModel,
    trials: int,
    seed: int | None = None,
    lattice_id: int = 0,
    chunk: int = 256,
    progress: bool = False,
    compiled: CompiledCircuit | None = None,
) -> TrialBatch:
    """Run ``trials`` independent trials; trial ``i`` draws from stream ``(seed, lattice_id, i)``."""
    compiled = compiled or compile_circuit(w, m)
    n_loc = len(compiled.locations)
    quiet = is_noiseless(m)
    parts = []
    for lo in tqdm(range(0, trials, chunk), desc="trials", disable=not progress):
        hi = min(trials, lo + chunk)
        uniforms = None
        if not quiet:
            uniforms = np.stack([make_rng(seed, lattice_id, i).random(n_loc) for i in range(lo, hi)])
        parts.append(sweep(compiled, uniforms, hi - lo))
    if not parts:
        empty = np.zeros((0, compiled.n_qubits), dtype=bool)
        return TrialBatch(np.zeros((0, compiled.n_measurements), dtype=bool), empty, empty.copy(), compiled)
    flips = np.concatenate([p[0] for p in parts])
    x = np.concatenate([p[1] for p in parts])
    z = np.concatenate([p[2] for p in parts])
    keys = [(seed if seed is not None else -1, lattice_id, i) for i in range(trials)]
    logger.debug("simulated %d trials over %d locations", trials, n_loc)
    return TrialBatch(flips, x, z, compiled, keys)

"""One round of Bell-pair purification, on physical pairs or on encoded blocks."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from src.codes import CodeDef
from src.errors import DimensionMismatchError, InvalidParameterError
from src.noise import ErrorModel
from src.pauli import cnot, h, idle, measure
from src.purification.pairs import EncodedPairState, Op, run_ops

logger = logging.getLogger(__name__)


@dataclass
class RoundResult:
    """Surviving pairs of a round and the per-attempt success mask."""

    pairs: EncodedPairState
    kept: np.ndarray

    @property
    def attempts(self) -> int:
        return int(self.kept.shape[0])

    @property
    def successes(self) -> int:
        return int(self.kept.sum())


def _check_partners(a: EncodedPairState, b: EncodedPairState) -> None:
    if len(a) != len(b):
        raise DimensionMismatchError(f"need equally many pairs to purify, got {len(a)} and {len(b)}")
    if (a.code_a.name, a.code_b.name) != (b.code_a.name, b.code_b.name):
        raise InvalidParameterError("both pairs of a round must share the same encodings")


def physical_round_ops(basis_toggle: bool = True) -> list[Op]:
    """Qubits ``[a1, b1, a2, b2]``: bilateral CNOT, then H on the kept pair while the other is measured."""
    flip = h if basis_toggle else idle
    return [
        (1, cnot(0, 2), False),
        (1, cnot(1, 3), False),
        (2, flip(0), not basis_toggle),
        (2, flip(1), not basis_toggle),
        (2, measure(2), False),
        (2, measure(3), False),
    ]


def purify_physical(
    a: EncodedPairState,
    b: EncodedPairState,
    m: ErrorModel,
    basis_toggle: bool = True,
    rng: np.random.Generator | int | None = None,
) -> RoundResult:
    """Purify pairs ``a`` with sacrificial pairs ``b``; pairs whose two outcomes disagree are dropped.

    The H gates swap the X and Z axes of the survivors, so consecutive
    rounds catch X and Z discrepancies in turn.
    """
    _check_partners(a, b)
    if not (a.code_a.is_physical and a.code_b.is_physical):
        raise InvalidParameterError("purify_physical works on unencoded pairs only")
    x = np.concatenate([a.x, b.x], axis=1)
    z = np.concatenate([a.z, b.z], axis=1)
    flips, x, z = run_ops(physical_round_ops(basis_toggle), 4, m, (x, z), rng)
    kept = flips[:, 0] == flips[:, 1]
    out = EncodedPairState(a.code_a, a.code_b, x[kept, :2], z[kept, :2], [*a.history, "purify:physical"])
    return RoundResult(out, kept)


def encoded_round_ops(width: int, reverse: bool) -> list[Op]:
    """Blocks ``[pair 1, pair 2]`` of ``width`` qubits each; pair 2 is measured transversally.

    The plain round is a transversal CNOT from pair 1 to pair 2 followed by Z
    measurement; the reversed round points the CNOT the other way and reads
    pair 2 in the X basis.
    """
    ops: list[Op] = []
    for i in range(width):
        ops.append((1, cnot(width + i, i) if reverse else cnot(i, width + i), False))
    last = 2
    if reverse:
        ops += [(2, h(width + i), False) for i in range(width)]
        ops += [(2, idle(i), True) for i in range(width)]
        last = 3
    ops += [(last, measure(width + i), False) for i in range(width)]
    ops += [(last, idle(i), True) for i in range(width)]
    return ops


def _block_parity(code: CodeDef, bits: np.ndarray, reverse: bool) -> tuple[np.ndarray, np.ndarray]:
    """Decoded logical parity and raw syndrome of one measured block."""
    if reverse:
        decoder, support = code.z_decoder, code.logical_x.x_bits
    else:
        decoder, support = code.x_decoder, code.logical_z.z_bits
    parity = (decoder.correct(bits) & support).sum(axis=1) % 2 == 1
    return parity, decoder.syndrome(bits)


def purify_encoded(
    a: EncodedPairState,
    b: EncodedPairState,
    m: ErrorModel,
    round_index: int,
    strict: bool = False,
    rng: np.random.Generator | int | None = None,
) -> RoundResult:
    """Purify encoded pairs with transversal CNOTs and a transversal measurement of the sacrificial pair.

    Odd rounds reverse the CNOT and measure X, so the two error types are
    checked alternately. The logical outcome of each measured block comes
    from its lookup decoder; with ``strict`` a nonzero syndrome on either
    block also discards the pair. Only same-basis checks are visible.
    """
    _check_partners(a, b)
    reverse = round_index % 2 == 1
    w = a.width
    x = np.concatenate([a.x, b.x], axis=1)
    z = np.concatenate([a.z, b.z], axis=1)
    flips, x, z = run_ops(encoded_round_ops(w, reverse), 2 * w, m, (x, z), rng)
    # measurements come out in qubit order of pair 2
    pa, sa = _block_parity(a.code_a, flips[:, a.block_a], reverse)
    pb, sb = _block_parity(a.code_b, flips[:, a.block_b], reverse)
    kept = pa == pb
    if strict:
        kept &= (sa == 0) & (sb == 0)
    label = "purify:strict" if strict else "purify:logical"
    out = EncodedPairState(a.code_a, a.code_b, x[kept, :w], z[kept, :w], [*a.history, label])
    logger.debug("round %d kept %d of %d encoded pairs", round_index, int(kept.sum()), len(kept))
    return RoundResult(out, kept)

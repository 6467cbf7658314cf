"""Code-capacity safety-net decoding and the logical-error verdict at the end of a run."""

from __future__ import annotations

import logging
import warnings
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from src.decoder.distances import GraphDistances
from src.decoder.matching import Matching, mwpm
from src.errors import DisconnectedEventError
from src.lattice.encodability import boundary_nodes, encodability_check, path_qubits, stabilizer_graph
from src.lattice.layout import KINDS, StabilizerLayout
from src.noise.trial import TrialState
from src.pauli import PauliFrame, PauliString

logger = logging.getLogger(__name__)

Matcher = Callable[..., Matching]

# Z stabilizers catch X errors and are fixed with X; X stabilizers the other way round.
CORRECTION_LETTER = {"Z": "X", "X": "Z"}


@dataclass(frozen=True)
class LogicalOutcome:
    x_error: bool
    z_error: bool

    @property
    def merged(self) -> bool:
        return self.x_error or self.z_error


class CodeCapacityDecoder:
    """Perfect-syndrome decoding on the layout's stabilizer graphs.

    Also supplies the data-qubit chains that turn matched stabilizer pairs
    into frame corrections.
    """

    def __init__(self, layout: StabilizerLayout):
        self.layout = layout
        self.n = layout.lattice.n_sites
        self.encodability = encodability_check(layout)
        self.graphs = {kind: stabilizer_graph(layout, kind) for kind in KINDS}
        self.distances = {kind: GraphDistances(g, boundary_nodes(g)) for kind, g in self.graphs.items()}
        self._live = np.zeros(self.n, dtype=bool)
        self._live[layout.live_data] = True
        if not self.encodability.encodable:
            warnings.warn("layout encodes no logical qubit; logical checks will always pass", stacklevel=2)

    def chain(self, kind: str, a: int, b: int | None = None) -> list[int]:
        """Data qubits joining stabilizers ``a`` and ``b`` (layout indices), or ``a`` and its nearest boundary."""
        g, dist = self.graphs[kind], self.distances[kind]
        if b is None:
            _, target = dist.nearest_boundary(a)
            if target is None:
                raise DisconnectedEventError(f"{kind} stabilizer {a} has no path to a boundary")
            return path_qubits(g, dist.path(a, target))
        if a == b:
            return []
        if dist.pair(a, b) == float("inf"):
            raise DisconnectedEventError(f"{kind} stabilizers {a} and {b} are not connected")
        return path_qubits(g, dist.path(a, b))

    def syndrome(self, residual: PauliString, kind: str) -> list[int]:
        bits = residual.x_bits if kind == "Z" else residual.z_bits
        return [
            i
            for i in self.layout.of_kind(kind)
            if int(np.count_nonzero(bits[sorted(self.layout.stabilizers[i].data_members)])) % 2
        ]

    def restrict(self, residual: PauliString) -> PauliString:
        """Drop everything outside the live data qubits."""
        return PauliString(residual.x_bits & self._live, residual.z_bits & self._live)

    def correction(self, residual: PauliString, matcher: Matcher = mwpm) -> PauliFrame:
        frame = PauliFrame.empty(self.n)
        for kind in KINDS:
            defects = self.syndrome(residual, kind)
            if not defects:
                continue
            for a, b in matcher(defects, self.distances[kind]).pairs:
                frame.flip(CORRECTION_LETTER[kind], self.chain(kind, a, b))
        return frame

    def logical_flips(self, residual: PauliString) -> tuple[bool, bool]:
        """``(x_error, z_error)``: odd overlap with the logical Z and logical X representatives."""
        enc = self.encodability
        x_error = bool(np.count_nonzero(residual.x_bits[list(enc.logical_z)]) % 2) if enc.logical_z else False
        z_error = bool(np.count_nonzero(residual.z_bits[list(enc.logical_x)]) % 2) if enc.logical_x else False
        return x_error, z_error


def assess_logical(
    t: TrialState,
    frame: PauliFrame,
    layout: StabilizerLayout,
    decoder: CodeCapacityDecoder | None = None,
) -> LogicalOutcome:
    """Apply the frame, clean up with one perfect extraction, then test the logical operators."""
    decoder = decoder or CodeCapacityDecoder(layout)
    residual = decoder.restrict(frame.apply(t.residual))
    cleanup = decoder.correction(residual)
    if not cleanup.is_identity:
        logger.debug("safety-net extraction corrected %d qubits", int(cleanup.x.sum() + cleanup.z.sum()))
    x_error, z_error = decoder.logical_flips(cleanup.apply(residual))
    return LogicalOutcome(x_error, z_error)

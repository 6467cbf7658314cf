"""Sliding-window matching over the nest and the Pauli frame it produces."""

from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from src.decoder.assess import CORRECTION_LETTER, CodeCapacityDecoder, Matcher
from src.decoder.distances import GraphDistances
from src.decoder.events import DetectionEvent, extract_events
from src.decoder.matching import mwpm
from src.decoder.nest import BOUNDARY, Nest, Vertex
from src.lattice.layout import KINDS, StabilizerLayout
from src.noise.trial import TrialState
from src.pauli import PauliFrame

logger = logging.getLogger(__name__)

Pair = tuple[Vertex, "Vertex | None"]


class WindowDecoder:
    """Matches detection events ``nest.window`` correction cycles at a time.

    Shortest paths on the nest are cached across trials, so one decoder
    should serve a whole batch.
    """

    def __init__(
        self,
        nest: Nest,
        layout: StabilizerLayout,
        matcher: Matcher = mwpm,
        code: CodeCapacityDecoder | None = None,
    ):
        self.nest = nest
        self.layout = layout
        self.matcher = matcher
        self.code = code or CodeCapacityDecoder(layout)
        self.distances = {kind: GraphDistances(nest.graph(kind), [BOUNDARY]) for kind in KINDS}

    def slide(self, kind: str, events: Sequence[DetectionEvent]) -> list[Pair]:
        """Match each window, retiring the oldest cycle.

        An old event is committed only together with its partner: the
        syndrome to be retired stays while its pair is still in the window.
        Whatever is left after the last window is matched in one go.
        """
        step = {e.vertex: e.step for e in events}
        active = [e.vertex for e in events]
        bounds, width = self.nest.boundaries, max(1, self.nest.window)
        dist = self.distances[kind]
        committed: list[Pair] = []
        for r in range(width, len(bounds)):
            visible = [v for v in active if step[v] <= bounds[r]]
            if not visible:
                continue
            retire = bounds[r - width + 1]
            done: set[Vertex] = set()
            for a, b in self.matcher(visible, dist).pairs:
                if step[a] <= retire and (b is None or step[b] <= retire):
                    committed.append((a, b))
                    done.add(a)
                    if b is not None:
                        done.add(b)
            active = [v for v in active if v not in done]
        if active:
            committed.extend(self.matcher(active, dist).pairs)
        return committed

    def decode(self, t: TrialState) -> PauliFrame:
        events = extract_events(t, self.nest)
        frame = PauliFrame.empty(t.residual.n)
        enc = self.code.encodability
        for kind in KINDS:
            mine = [e for e in events if self.nest.kind_of(e.vertex) == kind]
            if not mine:
                continue
            letter = CORRECTION_LETTER[kind]
            predicted = False
            for a, b in self.slide(kind, mine):
                target = BOUNDARY if b is None else b
                predicted ^= self.nest.path_flips_logical(kind, self.distances[kind].path(a, target))
                if b is not None and a[0] == b[0]:
                    continue
                la = self.nest.layout_index[a[0]]
                lb = None if b is None else self.nest.layout_index[b[0]]
                frame.flip(letter, self.code.chain(kind, la, lb))
            # The chains fix the syndrome; the nest decides which logical class they belong to.
            guard, fix = (enc.logical_z, enc.logical_x) if kind == "Z" else (enc.logical_x, enc.logical_z)
            if guard and fix:
                bits = frame.x if kind == "Z" else frame.z
                if bool(np.count_nonzero(bits[list(guard)]) % 2) != predicted:
                    frame.flip(letter, fix)
        logger.debug("decoded %d events", len(events))
        return frame


def decode_window(
    t: TrialState,
    nest: Nest,
    layout: StabilizerLayout,
    matcher: Matcher = mwpm,
) -> PauliFrame:
    """Pauli frame for one trial; build a ``WindowDecoder`` directly to reuse caches across trials."""
    return WindowDecoder(nest, layout, matcher).decode(t)

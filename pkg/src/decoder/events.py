"""Detection events: changes between consecutive measurements of one stabilizer."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.decoder.nest import Nest, Vertex
from src.noise.trial import TrialState


@dataclass(frozen=True)
class DetectionEvent:
    vertex: Vertex
    step: int

    @property
    def stabilizer_id(self) -> int:
        return self.vertex[0]


def terminal_signs(t: TrialState, nest: Nest) -> dict[int, int]:
    """Signs a perfect extraction of every stabilizer would give on the trial's residual."""
    out = {}
    for sid, (kind, members) in nest.terminal.items():
        bits = t.residual.x_bits if kind == "Z" else t.residual.z_bits
        out[sid] = -1 if int(np.count_nonzero(bits[list(members)])) % 2 else 1
    return out


def extract_events(t: TrialState, nest: Nest | None = None) -> list[DetectionEvent]:
    """One event wherever a stabilizer's sign differs from its previous one, the first from +1.

    Given a nest with terminal vertices, the perfect extraction on the
    residual closes each stabilizer's record.
    """
    final = terminal_signs(t, nest) if nest is not None and nest.terminal else {}
    last_step = max((slot for log in t.syndrome_log.values() for slot, _ in log), default=-1) + 2
    events = []
    for sid in sorted(set(t.syndrome_log) | set(final)):
        log = t.syndrome_log.get(sid, [])
        prev = 1
        for k, (slot, sign) in enumerate(log):
            if sign != prev:
                events.append(DetectionEvent((sid, k), slot + 1))
            prev = sign
        if sid in final and final[sid] != prev:
            events.append(DetectionEvent((sid, len(log)), last_step))
    events.sort(key=lambda e: (e.step, e.vertex))
    return events

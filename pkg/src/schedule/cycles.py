"""Measurement cycles and error-correction round boundaries of a whole circuit."""

from __future__ import annotations

from fractions import Fraction

from src.errors import InsufficientHorizonError
from src.lattice.layout import StabilizerSpec
from src.schedule.scheduler import WholeCircuit


def _stabilizer_id(w: WholeCircuit, s: StabilizerSpec | int) -> int:
    if isinstance(s, int):
        return s
    for i, c in enumerate(w.circuits):
        if c.stabilizer == s:
            return i
    raise KeyError(f"stabilizer at {s.home} is not part of this circuit")


def cycle_of(w: WholeCircuit, s: StabilizerSpec | int) -> Fraction:
    """Mean number of steps between consecutive measurements of ``s``, waiting included."""
    sid = _stabilizer_id(w, s)
    m = w.measurements(sid)
    if len(m) < 2:
        raise InsufficientHorizonError(f"stabilizer {sid} measured {len(m)} time(s) in {w.horizon} steps")
    return Fraction(m[-1] - m[0], len(m) - 1)


def correction_boundaries(w: WholeCircuit) -> list[int]:
    """Steps at which every stabilizer has finished a measurement since the previous boundary.

    A measurement in slot ``m`` is complete at step ``m + 1``. The first
    boundary is 0; the list stops when some stabilizer has no further
    measurement inside the horizon.
    """
    return w.correction_boundaries()


def mean_correction_cycle(w: WholeCircuit) -> float:
    """Steps per correction round, the start-up round included."""
    b = correction_boundaries(w)
    if len(b) < 2:
        raise InsufficientHorizonError(f"no complete correction round in {w.horizon} steps")
    return b[-1] / (len(b) - 1)


def error_correction_cycle(w: WholeCircuit) -> int:
    return int(round(mean_correction_cycle(w)))

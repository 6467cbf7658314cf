"""Ensemble statistics: metric/rate correlation, culling and geometric-mean aggregation."""

from __future__ import annotations

import logging
import math
import warnings
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from src.errors import InvalidParameterError
from src.harness.metrics import METRIC_COLUMNS, ChipMetrics

logger = logging.getLogger(__name__)

DEFAULT_REFERENCE_P = 0.002

Cell = tuple[float, int]


def pearson(a: Sequence[float], b: Sequence[float]) -> float:
    """Pearson r; NaN when either side has no variance."""
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    if x.shape != y.shape:
        raise InvalidParameterError(f"cannot correlate {x.shape} with {y.shape}")
    if x.size < 2 or np.ptp(x) == 0 or np.ptp(y) == 0:
        return float("nan")
    return float(stats.pearsonr(x, y)[0])


@dataclass
class CorrelationTable:
    target: str
    reference_p: float
    columns: tuple[str, ...] = METRIC_COLUMNS
    cells: dict[Cell, dict[str, float]] = field(default_factory=dict)
    sizes: dict[Cell, int] = field(default_factory=dict)

    @property
    def average(self) -> dict[str, float]:
        """Mean over cells of each column, ignoring undefined entries."""
        out = {}
        for c in self.columns:
            vals = [row[c] for row in self.cells.values() if not math.isnan(row[c])]
            out[c] = float(np.mean(vals)) if vals else float("nan")
        return out

    def strongest(self) -> str:
        avg = {c: v for c, v in self.average.items() if not math.isnan(v)}
        if not avg:
            raise InvalidParameterError("every correlation is undefined")
        return max(avg, key=lambda c: avg[c])

    def rows(self) -> list[dict[str, object]]:
        out: list[dict[str, object]] = []
        for (y, d), row in sorted(self.cells.items()):
            out.append({"yield": y, "distance": d, "lattices": self.sizes[(y, d)], **row})
        out.append({"yield": "ave", "distance": "", "lattices": sum(self.sizes.values()), **self.average})
        return out


def _rated(ensemble: Sequence[ChipMetrics], reference_p: float, rate: str) -> list[ChipMetrics]:
    return [c for c in ensemble if c.encodable and not math.isnan(c.rate(reference_p, rate))]


def correlate(
    ensemble: Sequence[ChipMetrics],
    target: str = "linear",
    reference_p: float = DEFAULT_REFERENCE_P,
    rate: str = "x",
    columns: Sequence[str] = METRIC_COLUMNS,
) -> CorrelationTable:
    """Pearson correlation of each metric with the logical rate (or its log) per (yield, distance) cell."""
    if target not in ("linear", "log"):
        raise InvalidParameterError(f"target must be 'linear' or 'log', got {target!r}")
    rated = _rated(ensemble, reference_p, rate)
    if len(rated) < 3:
        raise InvalidParameterError(f"need at least 3 lattices with rates at p={reference_p}, got {len(rated)}")

    table = CorrelationTable(target, reference_p, tuple(columns))
    groups: dict[Cell, list[ChipMetrics]] = {}
    for c in rated:
        groups.setdefault((c.yield_, c.distance), []).append(c)
    for cell, members in sorted(groups.items()):
        y = np.array([c.rate(reference_p, rate) for c in members])
        if target == "log":
            keep = y > 0
            if not keep.all():
                logger.warning("dropping %d zero-rate lattices from the log correlation of %s", (~keep).sum(), cell)
            members = [c for c, k in zip(members, keep) if k]
            y = np.log(y[keep])
        table.cells[cell] = {col: pearson([c.value(col) for c in members], y) for col in columns}
        table.sizes[cell] = len(members)
    return table


def cull(
    ensemble: Sequence[ChipMetrics],
    fraction: float,
    reference_p: float = DEFAULT_REFERENCE_P,
    rate: str = "x",
) -> list[ChipMetrics]:
    """Drop the worst ``fraction`` of the whole ensemble, unencodable chips counted first.

    The fraction applies to the original number of generated chips, so 0.9
    of 30 keeps the best 3.
    """
    if not 0.0 <= fraction < 1.0:
        raise InvalidParameterError(f"cull fraction must be in [0, 1), got {fraction}")
    drop = int(round(fraction * len(ensemble)))

    def badness(c: ChipMetrics) -> float:
        r = c.rate(reference_p, rate)
        return math.inf if not c.encodable or math.isnan(r) else r

    ranked = sorted(ensemble, key=lambda c: (badness(c), c.lattice_id))
    return ranked[: len(ranked) - drop]


def geometric_mean_rate(ensemble: Sequence[ChipMetrics], p: float, rate: str = "x") -> float:
    """Geometric mean over the encodable chips with a rate at ``p``; NaN for none."""
    vals = np.array([c.rate(p, rate) for c in _rated(ensemble, p, rate)])
    if not vals.size:
        return float("nan")
    if (vals == 0).any():
        zeros = int((vals == 0).sum())
        warnings.warn(f"{zeros} chips saw no logical error at p={p}; geometric mean is 0", stacklevel=2)
        return 0.0
    return float(stats.gmean(vals))

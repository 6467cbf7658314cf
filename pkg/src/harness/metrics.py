"""Static and scheduled quality metrics of one chip."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields
from typing import Any

import numpy as np

from src.circuits import circuit_kdq, circuit_kq
from src.lattice import StabilizerLayout, encodability_check
from src.schedule import WholeCircuit

logger = logging.getLogger(__name__)

# Columns correlated against logical error rates, in table order.
METRIC_COLUMNS = (
    "n_stabs",
    "faulty_total",
    "faulty_data",
    "faulty_ancilla",
    "reduced_distance",
    "n_z",
    "max_qubits_z",
    "mean_qubits_z",
    "max_dataq_z",
    "mean_dataq_z",
    "max_depth_z",
    "mean_depth_z",
    "max_kq_z",
    "mean_kq_z",
    "max_kdq_z",
    "mean_kdq_z",
    "max_cycle_z",
    "mean_cycle_z",
    "max_cq_z",
    "mean_cq_z",
    "max_cdq_z",
    "mean_cdq_z",
    "z_per_step",
)


@dataclass
class ChipMetrics:
    """One row of the chip-quality tables. Averages are arithmetic means over Z stabilizers."""

    lattice_id: int
    distance: int
    yield_: float
    encodable: bool
    n_stabs: int = 0
    faulty_total: int = 0
    faulty_data: int = 0
    faulty_ancilla: int = 0
    reduced_distance: int = 0
    n_z: int = 0
    max_qubits_z: int = 0
    mean_qubits_z: float = 0.0
    max_dataq_z: int = 0
    mean_dataq_z: float = 0.0
    max_depth_z: int = 0
    mean_depth_z: float = 0.0
    max_kq_z: int = 0
    mean_kq_z: float = 0.0
    max_kdq_z: int = 0
    mean_kdq_z: float = 0.0
    max_cycle_z: float = 0.0
    mean_cycle_z: float = 0.0
    max_cq_z: float = 0.0
    mean_cq_z: float = 0.0
    max_cdq_z: float = 0.0
    mean_cdq_z: float = 0.0
    z_per_step: float = 0.0
    # p -> per-cycle logical rate
    x_rates: dict[float, float] = field(default_factory=dict)
    z_rates: dict[float, float] = field(default_factory=dict)

    def value(self, column: str) -> float:
        return float(getattr(self, column))

    def rate(self, p: float, target: str = "x") -> float:
        rates = self.x_rates if target == "x" else self.z_rates
        return rates.get(p, float("nan"))

    def to_row(self) -> dict[str, Any]:
        row: dict[str, Any] = {
            "lattice_id": self.lattice_id,
            "distance": self.distance,
            "yield": self.yield_,
            "encodable": int(self.encodable),
        }
        for c in METRIC_COLUMNS:
            row[c] = getattr(self, c)
        return row

    @classmethod
    def from_row(cls, row: dict[str, str]) -> ChipMetrics:
        """Inverse of ``to_row``; floats are written at full precision so the record comes back unchanged."""
        floats = {f.name for f in fields(cls) if f.type == "float"}
        kwargs: dict[str, Any] = {c: float(row[c]) if c in floats else int(row[c]) for c in METRIC_COLUMNS}
        return cls(
            lattice_id=int(row["lattice_id"]),
            distance=int(row["distance"]),
            yield_=float(row["yield"]),
            encodable=bool(int(row["encodable"])),
            **kwargs,
        )


def unencodable_metrics(layout: StabilizerLayout, lattice_id: int = 0, yield_: float = 1.0) -> ChipMetrics:
    """Fault counts only, for chips that carry no logical qubit."""
    lat = layout.lattice
    return ChipMetrics(
        lattice_id=lattice_id,
        distance=lat.distance,
        yield_=yield_,
        encodable=False,
        n_stabs=len(layout.stabilizers),
        faulty_total=len(lat.faulty),
        faulty_data=len(lat.faulty_data),
        faulty_ancilla=len(lat.faulty_ancilla),
    )


def compute_metrics(
    layout: StabilizerLayout,
    whole: WholeCircuit,
    lattice_id: int = 0,
    yield_: float = 1.0,
) -> ChipMetrics:
    """Every column of the chip tables for a scheduled layout.

    KQ and KDQ use circuit depth; CQ and CDQ replace depth by the
    stabilizer's measurement cycle, waiting included. Stabilizers measured
    fewer than twice inside the horizon have no cycle and are left out of
    the cycle columns.
    """
    lat = layout.lattice
    enc = encodability_check(layout)
    z_ids = [sid for sid, c in enumerate(whole.circuits) if c.kind == "Z"]
    z_circuits = [whole.circuits[sid] for sid in z_ids]
    qubits = np.array([len(c.qubits) for c in z_circuits])
    dataq = np.array([len(c.stabilizer.data_members) for c in z_circuits])
    depth = np.array([c.depth for c in z_circuits])
    kq = np.array([circuit_kq(c) for c in z_circuits])
    kdq = np.array([circuit_kdq(c) for c in z_circuits])

    stats = whole.cycle_stats()
    with_cycle = [i for i, sid in enumerate(z_ids) if sid in stats]
    if len(with_cycle) < len(z_ids):
        logger.warning("%d Z stabilizers have no cycle inside %d steps", len(z_ids) - len(with_cycle), whole.horizon)
    cycle = np.array([stats[z_ids[i]] for i in with_cycle])
    cq = cycle * qubits[with_cycle]
    cdq = cycle * dataq[with_cycle]

    def top(a: np.ndarray) -> float:
        return float(a.max()) if a.size else 0.0

    def avg(a: np.ndarray) -> float:
        return float(a.mean()) if a.size else 0.0

    return ChipMetrics(
        lattice_id=lattice_id,
        distance=lat.distance,
        yield_=yield_,
        encodable=enc.encodable,
        n_stabs=len(layout.stabilizers),
        faulty_total=len(lat.faulty),
        faulty_data=len(lat.faulty_data),
        faulty_ancilla=len(lat.faulty_ancilla),
        reduced_distance=enc.reduced_distance,
        n_z=len(z_ids),
        max_qubits_z=int(top(qubits)),
        mean_qubits_z=avg(qubits),
        max_dataq_z=int(top(dataq)),
        mean_dataq_z=avg(dataq),
        max_depth_z=int(top(depth)),
        mean_depth_z=avg(depth),
        max_kq_z=int(top(kq)),
        mean_kq_z=avg(kq),
        max_kdq_z=int(top(kdq)),
        mean_kdq_z=avg(kdq),
        max_cycle_z=top(cycle),
        mean_cycle_z=avg(cycle),
        max_cq_z=top(cq),
        mean_cq_z=avg(cq),
        max_cdq_z=top(cdq),
        mean_cdq_z=avg(cdq),
        z_per_step=whole.z_measurements_per_step(),
    )

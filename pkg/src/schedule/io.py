"""Whole-circuit JSON dump and load."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from src.circuits.io import circuit_from_dict, circuit_to_dict
from src.errors import ConfigError
from src.lattice.io import layout_from_dict, layout_to_dict
from src.pauli import GateKind
from src.schedule.scheduler import Instance, ScheduledEvent, WholeCircuit


def whole_circuit_to_dict(w: WholeCircuit) -> dict[str, Any]:
    return {
        "horizon": w.horizon,
        "n_qubits": w.n_qubits,
        "layout": layout_to_dict(w.layout) if w.layout is not None else None,
        "circuits": [circuit_to_dict(c, i) for i, c in enumerate(w.circuits)],
        "instances": [
            {"stabilizer_id": i.stabilizer_id, "start": i.start, "end": i.end, "waits": i.waits, "restarts": i.restarts}
            for i in w.instances
        ],
        "events": [e.to_dict() for e in w.events],
        "metadata": w.metadata,
    }


def whole_circuit_from_dict(data: dict[str, Any]) -> WholeCircuit:
    try:
        layout = layout_from_dict(data["layout"]) if data.get("layout") else None
        if layout is None:
            raise ConfigError("whole-circuit file carries no layout")
        circuits = [circuit_from_dict(c, layout) for c in data["circuits"]]
        events = [ScheduledEvent.from_dict(e) for e in data["events"]]
        by_instance: dict[int, list[ScheduledEvent]] = {}
        for e in events:
            by_instance.setdefault(e.instance, []).append(e)
        instances = []
        for idx, meta in enumerate(data["instances"]):
            evs = sorted(by_instance.get(idx, []), key=lambda e: e.slot)
            sid = int(meta["stabilizer_id"])
            gathers = {}
            for e in evs:
                member = circuits[sid].gather_member(e)  # type: ignore[arg-type]
                if member is not None:
                    gathers[member] = e.slot
            instances.append(
                Instance(
                    stabilizer_id=sid,
                    kind=circuits[sid].kind,
                    start=int(meta["start"]),
                    end=int(meta["end"]),
                    measure_slot=next(e.slot for e in evs if e.gate.kind is GateKind.MEASURE),
                    events=evs,
                    gather_times=gathers,
                    waits=int(meta.get("waits", 0)),
                    restarts=int(meta.get("restarts", 0)),
                )
            )
        return WholeCircuit(
            circuits=circuits,
            horizon=int(data["horizon"]),
            instances=instances,
            n_qubits=int(data.get("n_qubits", layout.lattice.n_sites)),
            layout=layout,
            metadata=dict(data.get("metadata") or {}),
        )
    except (KeyError, IndexError, StopIteration, TypeError, ValueError) as e:
        raise ConfigError(f"Malformed whole-circuit record: {e}") from e


def save_whole_circuit(w: WholeCircuit, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(whole_circuit_to_dict(w)), encoding="utf-8")
    return path


def load_whole_circuit(path: str | Path) -> WholeCircuit:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"Whole-circuit file not found: {p}")
    return whole_circuit_from_dict(json.loads(p.read_text(encoding="utf-8")))

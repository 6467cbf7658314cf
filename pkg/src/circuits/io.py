"""JSON files holding a layout and its per-stabilizer circuits."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from src.circuits.compose import GateEvent, StabilizerCircuit
from src.errors import ConfigError
from src.lattice.io import layout_from_dict, layout_to_dict
from src.lattice.layout import StabilizerLayout, StabilizerSpec


def circuit_to_dict(c: StabilizerCircuit, index: int | None = None) -> dict[str, Any]:
    out: dict[str, Any] = {
        "stabilizer": c.stabilizer.to_dict(),
        "depth": c.depth,
        "ancilla_path": list(c.ancilla_path),
        "cover": list(c.cover),
        "metadata": c.metadata,
        "events": [e.to_dict() for e in c.events],
    }
    if index is not None:
        out["stabilizer_id"] = index
    return out


def circuit_from_dict(data: dict[str, Any], layout: StabilizerLayout) -> StabilizerCircuit:
    try:
        idx = data.get("stabilizer_id")
        spec = layout.stabilizers[int(idx)] if idx is not None else StabilizerSpec.from_dict(data["stabilizer"])
        return StabilizerCircuit(
            stabilizer=spec,
            events=[GateEvent.from_dict(e) for e in data["events"]],
            depth=int(data["depth"]),
            ancilla_path=tuple(int(s) for s in data.get("ancilla_path", ())),
            cover=tuple(int(s) for s in data.get("cover", ())),
            metadata=dict(data.get("metadata") or {}),
        )
    except (KeyError, IndexError, TypeError, ValueError) as e:
        raise ConfigError(f"Malformed circuit record: {e}") from e


def save_circuits(layout: StabilizerLayout, circuits: list[StabilizerCircuit], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"layout": layout_to_dict(layout), "circuits": [circuit_to_dict(c, i) for i, c in enumerate(circuits)]}
    path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
    return path


def load_circuits(path: str | Path) -> tuple[StabilizerLayout, list[StabilizerCircuit]]:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"Circuit file not found: {p}")
    data = json.loads(p.read_text(encoding="utf-8"))
    if "layout" not in data or "circuits" not in data:
        raise ConfigError(f"{p} is not a circuit file (needs 'layout' and 'circuits')")
    layout = layout_from_dict(data["layout"])
    return layout, [circuit_from_dict(c, layout) for c in data["circuits"]]

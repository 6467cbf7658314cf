"""Lattice JSON files: dimensions, per-site role and status, seed."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from src.errors import ConfigError
from src.lattice.layout import MergePolicy, StabilizerLayout, StabilizerSpec
from src.lattice.model import Lattice, Status


def lattice_to_dict(lattice: Lattice) -> dict[str, Any]:
    sites = []
    for s in range(lattice.n_sites):
        r, c = lattice.coords(s)
        sites.append({"x": c, "y": r, "role": lattice.role(s).value, "status": lattice.status(s).value})
    return {"distance": lattice.distance, "grid_rows": lattice.size, "sites": sites, "seed": lattice.seed}


def lattice_from_dict(data: dict[str, Any]) -> Lattice:
    try:
        d = int(data["distance"])
        size = int(data.get("grid_rows", 2 * d - 1))
        faulty = {
            int(site["y"]) * size + int(site["x"])
            for site in data.get("sites") or []
            if site.get("status") == Status.FAULTY.value
        }
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"Malformed lattice record: {e}") from e
    if size != 2 * d - 1:
        raise ConfigError(f"grid_rows={size} does not match distance {d}")
    seed = data.get("seed")
    return Lattice(d, frozenset(faulty), None if seed is None else int(seed))


def save_lattice(lattice: Lattice, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(lattice_to_dict(lattice), indent=2), encoding="utf-8")
    return path


def load_lattice(path: str | Path) -> Lattice:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"Lattice file not found: {p}")
    return lattice_from_dict(json.loads(p.read_text(encoding="utf-8")))


def layout_to_dict(layout: StabilizerLayout) -> dict[str, Any]:
    return {
        "lattice": lattice_to_dict(layout.lattice),
        "policy": layout.policy.value,
        "dead": sorted(layout.dead),
        "removed": [[kind, home] for kind, home in layout.removed],
        "stabilizers": [s.to_dict() for s in layout.stabilizers],
        "metadata": layout.metadata,
    }


def layout_from_dict(data: dict[str, Any]) -> StabilizerLayout:
    try:
        return StabilizerLayout(
            lattice=lattice_from_dict(data["lattice"]),
            stabilizers=[StabilizerSpec.from_dict(s) for s in data["stabilizers"]],
            dead=frozenset(int(q) for q in data.get("dead", ())),
            removed=[(str(k), int(a)) for k, a in data.get("removed", ())],
            policy=MergePolicy(data.get("policy", MergePolicy.SUPERUNIT.value)),
            metadata=dict(data.get("metadata") or {}),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"Malformed layout record: {e}") from e

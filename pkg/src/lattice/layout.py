"""Stabilizer reconfiguration around faulty data qubits."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

import networkx as nx

from src.lattice.model import Lattice
from src.pauli import PauliString, commutes

logger = logging.getLogger(__name__)

KINDS = ("Z", "X")

# Boundary sides where chains of each stabilizer graph terminate.
BOUNDARY_SIDES = {"Z": ("N", "S"), "X": ("W", "E")}


class MergePolicy(str, Enum):
    SUPERUNIT = "superunit"
    TRIANGULAR_Z = "triangular_z"
    TRIANGULAR_X = "triangular_x"


@dataclass(frozen=True)
class StabilizerSpec:
    """One (possibly merged) stabilizer: ``kind`` acting on ``data_members``."""

    kind: str
    data_members: frozenset[int]
    ancilla_pool: frozenset[int]
    merged_from: int = 1
    plaquettes: tuple[int, ...] = ()

    @property
    def home(self) -> int:
        return min(self.plaquettes)

    @property
    def is_superunit(self) -> bool:
        return self.merged_from >= 2

    def operator(self, n: int) -> PauliString:
        return PauliString.on(n, self.kind, self.data_members)

    def to_dict(self) -> dict[str, object]:
        return {
            "kind": self.kind,
            "data_members": sorted(self.data_members),
            "ancilla_pool": sorted(self.ancilla_pool),
            "merged_from": self.merged_from,
            "plaquettes": list(self.plaquettes),
        }

    @classmethod
    def from_dict(cls, data: dict) -> StabilizerSpec:
        return cls(
            kind=str(data["kind"]),
            data_members=frozenset(int(s) for s in data["data_members"]),
            ancilla_pool=frozenset(int(s) for s in data["ancilla_pool"]),
            merged_from=int(data.get("merged_from", 1)),
            plaquettes=tuple(int(s) for s in data.get("plaquettes", ())),
        )


@dataclass
class StabilizerLayout:
    lattice: Lattice
    stabilizers: list[StabilizerSpec]
    dead: frozenset[int] = frozenset()
    removed: list[tuple[str, int]] = field(default_factory=list)
    policy: MergePolicy = MergePolicy.SUPERUNIT
    metadata: dict[str, object] = field(default_factory=dict)

    @property
    def boundaries(self) -> dict[str, str]:
        """Side -> type of stabilizer chain that ends there."""
        return {side: kind for kind, sides in BOUNDARY_SIDES.items() for side in sides}

    def of_kind(self, kind: str) -> list[int]:
        return [i for i, s in enumerate(self.stabilizers) if s.kind == kind]

    @property
    def live_data(self) -> list[int]:
        """Working data qubits that still belong to the code."""
        return [s for s in self.lattice.data_sites if s not in self.dead]

    def holders(self, site: int, kind: str) -> list[int]:
        return [i for i in self.of_kind(kind) if site in self.stabilizers[i].data_members]

    def removed_homes(self, kind: str) -> set[int]:
        return {a for k, a in self.removed if k == kind}

    def is_abelian(self) -> bool:
        n = self.lattice.n_sites
        ops = [s.operator(n) for s in self.stabilizers]
        zs = [op for op, s in zip(ops, self.stabilizers) if s.kind == "Z"]
        xs = [op for op, s in zip(ops, self.stabilizers) if s.kind == "X"]
        return all(commutes(a, b) for a in zs for b in xs)


def perfect_ends(lattice: Lattice, site: int, kind: str) -> list[int | str]:
    """Both endpoints of a data qubit in the defect-free graph of ``kind``: home ancillae or a side."""
    ends: list[int | str] = [
        a for a in lattice.neighbors(site) if not lattice.is_data(a) and lattice.plaquette_kind(a) == kind
    ]
    if len(ends) == 1:
        r, c = lattice.coords(site)
        if kind == "Z":
            ends.append("N" if r == 0 else "S")
        else:
            ends.append("W" if c == 0 else "E")
    return ends


def _groups_for_kind(
    lattice: Lattice, kind: str, dead: set[int], triangular: bool, removed: list[tuple[str, int]]
) -> list[tuple[list[int], frozenset[int]]]:
    homes = [a for a in lattice.ancilla_sites if lattice.plaquette_kind(a) == kind]
    plaq = {a: set(lattice.plaquette(a)) for a in homes}
    holders_of: dict[int, list[int]] = {}
    for a in homes:
        for q in plaq[a]:
            holders_of.setdefault(q, []).append(a)

    alive = set(homes)
    # Boundary removal first: a dead qubit with a single live holder takes that holder with it.
    changed = True
    while changed:
        changed = False
        for q in sorted(dead):
            live = [a for a in holders_of.get(q, []) if a in alive]
            if len(live) == 1:
                alive.discard(live[0])
                removed.append((kind, live[0]))
                changed = True

    merged = nx.Graph()
    merged.add_nodes_from(sorted(alive))
    if not triangular:
        for q in sorted(dead):
            live = [a for a in holders_of.get(q, []) if a in alive]
            if len(live) == 2:
                merged.add_edge(live[0], live[1])

    out = []
    for group in sorted(sorted(c) for c in nx.connected_components(merged)):
        members: set[int] = set()
        for a in group:
            members ^= plaq[a]
        members -= dead
        if members:
            out.append((group, frozenset(members)))
        else:
            removed.extend((kind, a) for a in group)
    return out


def _ancilla_pool(lattice: Lattice, members: frozenset[int]) -> frozenset[int]:
    pool = set()
    for q in members:
        for a in lattice.neighbors(q):
            if not lattice.is_data(a) and lattice.is_working(a):
                pool.add(a)
    return frozenset(pool)


def reconfigure(lattice: Lattice, policy: MergePolicy | str = MergePolicy.SUPERUNIT) -> StabilizerLayout:
    """Rebuild the stabilizer set around faulty data qubits.

    Boundary stabilizers that lose a data qubit with no merge partner are
    removed first; the remaining pairs of plaquettes sharing a dead qubit are
    merged transitively, the merged operator being the product of its
    plaquettes with dead qubits dropped. Working data qubits left outside
    every stabilizer of one type are retired as well and the process repeats
    until nothing changes.
    """
    policy = MergePolicy(policy)
    dead = set(lattice.faulty_data)
    rounds = 0
    while True:
        rounds += 1
        removed: list[tuple[str, int]] = []
        per_kind = {
            kind: _groups_for_kind(
                lattice,
                kind,
                dead,
                triangular=(policy is MergePolicy.TRIANGULAR_Z and kind == "Z")
                or (policy is MergePolicy.TRIANGULAR_X and kind == "X"),
                removed=removed,
            )
            for kind in KINDS
        }
        covered = {kind: set().union(*(m for _, m in groups)) if groups else set() for kind, groups in per_kind.items()}
        orphans = {q for q in lattice.data_sites if q not in dead and not (q in covered["Z"] and q in covered["X"])}
        if not orphans:
            break
        logger.debug("retiring data qubits %s left without a stabilizer", sorted(orphans))
        dead |= orphans

    stabilizers = [
        StabilizerSpec(
            kind=kind,
            data_members=members,
            ancilla_pool=_ancilla_pool(lattice, members),
            merged_from=len(group),
            plaquettes=tuple(group),
        )
        for kind in KINDS
        for group, members in per_kind[kind]
    ]
    stabilizers.sort(key=lambda s: (s.home, s.kind))
    layout = StabilizerLayout(
        lattice=lattice,
        stabilizers=stabilizers,
        dead=frozenset(dead),
        removed=removed,
        policy=policy,
        metadata={"order": "boundary-removal-then-merge", "passes": rounds, "retired": sorted(dead - lattice.faulty)},
    )
    if policy is not MergePolicy.SUPERUNIT and not layout.is_abelian():
        logger.warning("%s policy produced anticommuting stabilizers; falling back to superunits", policy.value)
        return reconfigure(lattice, MergePolicy.SUPERUNIT)
    return layout

"""Planar-code qubit lattices with permanently faulty devices."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from src.errors import InvalidParameterError
from src.utils.seeding import make_rng

# Neighbour order used by every breadth-first search over the grid.
DIRECTIONS: tuple[tuple[str, int, int], ...] = (("E", 0, 1), ("S", 1, 0), ("W", 0, -1), ("N", -1, 0))


class Role(str, Enum):
    DATA = "data"
    ANCILLA = "ancilla"


class Status(str, Enum):
    WORKING = "working"
    FAULTY = "faulty"


class SingleFault(str, Enum):
    """Named single-fault placements (all interior data qubits)."""

    CENTER = "center"
    WEST = "west"
    NORTHWEST = "northwest"


@dataclass(frozen=True)
class Lattice:
    """A (2d-1) x (2d-1) planar-code grid; site label is ``row * (2d-1) + col``.

    Data qubits sit where ``row + col`` is even. Ancillae at odd rows measure
    Z plaquettes, ancillae at odd columns measure X plaquettes.
    """

    distance: int
    faulty: frozenset[int] = field(default_factory=frozenset)
    seed: int | None = None

    def __post_init__(self) -> None:
        _check_distance(self.distance)
        object.__setattr__(self, "faulty", frozenset(int(s) for s in self.faulty))
        bad = [s for s in self.faulty if not 0 <= s < self.n_sites]
        if bad:
            raise InvalidParameterError(f"faulty sites {bad} outside a {self.size}x{self.size} grid")

    @property
    def size(self) -> int:
        return 2 * self.distance - 1

    @property
    def n_sites(self) -> int:
        return self.size * self.size

    def coords(self, site: int) -> tuple[int, int]:
        return divmod(site, self.size)

    def site(self, row: int, col: int) -> int:
        return row * self.size + col

    def in_grid(self, row: int, col: int) -> bool:
        return 0 <= row < self.size and 0 <= col < self.size

    def role(self, site: int) -> Role:
        r, c = self.coords(site)
        return Role.DATA if (r + c) % 2 == 0 else Role.ANCILLA

    def is_data(self, site: int) -> bool:
        return self.role(site) is Role.DATA

    def status(self, site: int) -> Status:
        return Status.FAULTY if site in self.faulty else Status.WORKING

    def is_working(self, site: int) -> bool:
        return site not in self.faulty

    def plaquette_kind(self, site: int) -> str:
        """Stabilizer type whose home is this ancilla site."""
        r, _ = self.coords(site)
        return "Z" if r % 2 == 1 else "X"

    def neighbor(self, site: int, direction: str) -> int | None:
        r, c = self.coords(site)
        for name, dr, dc in DIRECTIONS:
            if name == direction:
                return self.site(r + dr, c + dc) if self.in_grid(r + dr, c + dc) else None
        raise InvalidParameterError(f"unknown direction {direction!r}")

    def neighbors(self, site: int) -> list[int]:
        """In-grid neighbours in E, S, W, N order."""
        r, c = self.coords(site)
        return [self.site(r + dr, c + dc) for _, dr, dc in DIRECTIONS if self.in_grid(r + dr, c + dc)]

    @property
    def data_sites(self) -> list[int]:
        return [s for s in range(self.n_sites) if self.is_data(s)]

    @property
    def ancilla_sites(self) -> list[int]:
        return [s for s in range(self.n_sites) if not self.is_data(s)]

    @property
    def faulty_data(self) -> list[int]:
        return sorted(s for s in self.faulty if self.is_data(s))

    @property
    def faulty_ancilla(self) -> list[int]:
        return sorted(s for s in self.faulty if not self.is_data(s))

    def plaquette(self, ancilla: int) -> list[int]:
        """Data sites around a home ancilla, faulty ones included."""
        return [s for s in self.neighbors(ancilla) if self.is_data(s)]

    def with_faults(self, sites: set[int] | frozenset[int], seed: int | None = None) -> Lattice:
        return Lattice(self.distance, frozenset(self.faulty | set(sites)), self.seed if seed is None else seed)


def _check_distance(d: int) -> None:
    if not isinstance(d, (int, np.integer)) or d < 3 or d % 2 == 0:
        raise InvalidParameterError(f"distance must be an odd integer >= 3, got {d!r}")


def generate_perfect(d: int) -> Lattice:
    _check_distance(d)
    return Lattice(int(d))


def apply_yield(lattice: Lattice, y: float, rng: np.random.Generator | int | None = None) -> Lattice:
    """Mark each site faulty independently with probability ``1 - y``.

    Pass an integer seed to make the fault set reproducible; it is recorded
    on the returned lattice.
    """
    if not 0.0 < y <= 1.0:
        raise InvalidParameterError(f"yield must be in (0, 1], got {y}")
    seed = int(rng) if isinstance(rng, (int, np.integer)) else lattice.seed
    gen = rng if isinstance(rng, np.random.Generator) else make_rng(seed)
    draws = gen.random(lattice.n_sites)
    faulty = {int(s) for s in np.flatnonzero(draws >= y)}
    return lattice.with_faults(faulty, seed=seed)


def single_fault_lattice(d: int, where: SingleFault | str = SingleFault.CENTER) -> Lattice:
    """Perfect lattice with one faulty interior data qubit."""
    where = SingleFault(where)
    base = generate_perfect(d)
    mid = d - 1
    row, col = {
        SingleFault.CENTER: (mid, mid),
        SingleFault.WEST: (mid, 2),
        SingleFault.NORTHWEST: (2, 2),
    }[where]
    return base.with_faults({base.site(row, col)})

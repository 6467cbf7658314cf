"""Decoder oracle suites: exact matching against brute force, single-error sweeps and the boundary scenario."""

from __future__ import annotations

import logging
import warnings
from collections.abc import Hashable, Sequence
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from src.decoder.assess import assess_logical
from src.decoder.distances import GraphDistances
from src.decoder.matching import brute_force_matching, mwpm
from src.decoder.nest import build_nest
from src.decoder.window import WindowDecoder
from src.errors import InvalidParameterError
from src.noise import ErrorModel, run_trial
from src.pauli import PauliString
from src.schedule import WholeCircuit

logger = logging.getLogger(__name__)


@dataclass
class BenchResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def random_matching_instance(
    rng: np.random.Generator,
    rows: int = 4,
    cols: int = 5,
    max_events: int = 8,
) -> tuple[GraphDistances, list[Hashable]]:
    """Weighted grid whose left column touches a boundary node ``"L"``, plus 1..``max_events`` events."""
    g = nx.grid_2d_graph(rows, cols)
    for u, v in g.edges:
        g.edges[u, v]["weight"] = float(rng.uniform(0.5, 3.0))
    for r in range(rows):
        g.add_edge((r, 0), "L", weight=float(rng.uniform(0.5, 3.0)))
    nodes = [n for n in g.nodes if n != "L"]
    k = int(rng.integers(1, max_events + 1))
    events = [nodes[i] for i in rng.choice(len(nodes), size=k, replace=False)]
    return GraphDistances(g, ["L"]), events


def matching_agreement(instances: int = 200, seed: int = 0, max_events: int = 8) -> BenchResult:
    """Blossom matching must reach the brute-force optimum on every random instance."""
    if instances <= 0:
        raise InvalidParameterError(f"instances must be positive, got {instances}")
    rng = np.random.default_rng(seed)
    out = BenchResult("mwpm_vs_brute_force")
    for i in range(instances):
        dist, events = random_matching_instance(rng, max_events=max_events)
        fast, slow = mwpm(events, dist).weight, brute_force_matching(events, dist).weight
        out.cases += 1
        if abs(fast - slow) > 1e-9:
            out.failures.append(f"instance {i}: mwpm {fast:.6f} != brute force {slow:.6f}")
    return out


class _Table:
    def __init__(self, pairs: dict[frozenset, float], boundary: dict[Hashable, float]):
        self.pairs = pairs
        self.boundary = boundary

    def pair(self, u: Hashable, v: Hashable) -> float:
        return self.pairs.get(frozenset((u, v)), float("inf"))

    def to_boundary(self, u: Hashable) -> float:
        return self.boundary.get(u, float("inf"))


def boundary_miscorrection() -> BenchResult:
    """Two events far apart but each close to a boundary are matched to the boundary, not to each other."""
    out = BenchResult("boundary_miscorrection", cases=1)
    m = mwpm(["a", "b"], _Table({frozenset(("a", "b")): 4.0}, {"a": 1.5, "b": 1.5}))
    if sorted(m.boundary_matched) != ["a", "b"] or abs(m.weight - 3.0) > 1e-9:
        out.failures.append(f"expected both events on the boundary at weight 3, got {m.pairs} at {m.weight}")
    return out


def single_error_sweep(
    whole: WholeCircuit,
    letters: Sequence[str] = ("X", "Z"),
    slots: Sequence[int] | None = None,
) -> BenchResult:
    """Inject one data-qubit error at a time into a noiseless run; none may end as a logical error."""
    layout = whole.layout
    if layout is None:
        raise InvalidParameterError("the single-error sweep needs a whole circuit with a layout")
    n = layout.lattice.n_sites
    m = ErrorModel.lattice(0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        decoder = WindowDecoder(build_nest(whole, m), layout)
    slots = list(slots) if slots is not None else [0, whole.horizon // 3, whole.horizon // 2]
    out = BenchResult(f"single_error_sweep_d{layout.lattice.distance}")
    for slot in slots:
        for q in layout.live_data:
            for letter in letters:
                t = run_trial(whole, m, injections={slot: PauliString.from_sparse(n, {q: letter})})
                out.cases += 1
                if assess_logical(t, decoder.decode(t), layout, decoder.code).merged:
                    out.failures.append(f"{letter} on qubit {q} at slot {slot}")
    logger.info("%s: %d cases, %d failures", out.name, out.cases, len(out.failures))
    return out

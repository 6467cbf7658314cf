"""The matching nest: detection vertices and weighted error edges of a whole circuit."""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Any

import networkx as nx
import numpy as np

from src.lattice.encodability import encodability_check
from src.noise.model import ErrorModel
from src.noise.trial import CompiledCircuit, Location, compile_circuit
from src.pauli import GateKind
from src.schedule.cycles import correction_boundaries
from src.schedule.scheduler import WholeCircuit

logger = logging.getLogger(__name__)

BOUNDARY = "B"
# Stand-in rate for weighting a nest when the model itself is noiseless.
REFERENCE_P = 1e-3

Vertex = tuple[int, int]
_Bits = tuple[tuple[bool, bool], ...]


@dataclass
class Nest:
    """Detection vertices ``(stabilizer_id, k)`` joined by the errors that flip them.

    Vertex ``(s, k)`` fires when the k-th measurement of stabilizer ``s``
    differs from the previous one (the first from +1). One extra terminal
    vertex per stabilizer stands for the perfect extraction after the last
    step. Edges carry the merged probability ``p``, the weight
    ``-ln(p / (1 - p))`` and ``logical``, whether the error also flips the
    logical observable guarded by that graph. Edges to ``BOUNDARY`` come
    from errors that flip a single vertex of that type.
    """

    graphs: dict[str, nx.Graph]
    vertex_kind: dict[Vertex, str]
    vertex_step: dict[Vertex, int]
    layout_index: dict[int, int]
    boundaries: list[int]
    window: int
    terminal: dict[int, tuple[str, tuple[int, ...]]] = field(default_factory=dict)
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def graph(self, kind: str) -> nx.Graph:
        return self.graphs[kind]

    def kind_of(self, v: Vertex) -> str:
        return self.vertex_kind[v]

    def degree(self, v: Vertex) -> int:
        return int(self.graphs[self.vertex_kind[v]].degree(v))

    @property
    def vertices(self) -> list[Vertex]:
        return sorted(self.vertex_kind)

    def path_flips_logical(self, kind: str, nodes: list) -> bool:
        g = self.graphs[kind]
        return bool(sum(g.edges[u, v]["logical"] for u, v in zip(nodes, nodes[1:])) % 2)

    def to_dict(self) -> dict[str, Any]:
        edges = []
        for kind, g in self.graphs.items():
            for u, v, data in g.edges(data=True):
                edges.append(
                    {
                        "kind": kind,
                        "u": list(u) if isinstance(u, tuple) else u,
                        "v": list(v) if isinstance(v, tuple) else v,
                        "p": data["p"],
                        "weight": data["weight"],
                        "logical": data["logical"],
                    }
                )
        return {
            "window": self.window,
            "boundaries": self.boundaries,
            "vertices": [
                {"vertex": list(v), "kind": k, "step": self.vertex_step[v]} for v, k in sorted(self.vertex_kind.items())
            ],
            "edges": edges,
            "diagnostics": self.diagnostics,
        }


def edge_weight(p: float) -> float:
    p = min(max(p, 1e-300), 0.5 - 1e-12)
    return -math.log(p / (1.0 - p))


def merge_probability(p1: float, p2: float) -> float:
    """Probability that exactly one of two independent edge mechanisms fires."""
    return p1 * (1.0 - p2) + p2 * (1.0 - p1)


class _Frame:
    """Sparse phase-free Pauli for the backward walk."""

    __slots__ = ("x", "z")

    def __init__(self, x: set[int] | None = None, z: set[int] | None = None):
        self.x: set[int] = set(x or ())
        self.z: set[int] = set(z or ())

    def __bool__(self) -> bool:
        return bool(self.x or self.z)

    def bits(self, qubits: tuple[int, ...]) -> _Bits:
        return tuple((q in self.x, q in self.z) for q in qubits)

    def conjugate(self, loc: Location) -> None:
        g = loc.gate
        if g.kind is GateKind.H:
            (q,) = g.qubits
            hx, hz = q in self.x, q in self.z
            self._put(self.x, q, hz)
            self._put(self.z, q, hx)
        elif g.kind is GateKind.CNOT:
            c, t = g.qubits
            xc, zt = c in self.x, t in self.z
            if xc:
                self.x ^= {t}
            if zt:
                self.z ^= {c}
        elif g.kind is GateKind.SWAP:
            a, b = g.qubits
            for s in (self.x, self.z):
                ha, hb = a in s, b in s
                self._put(s, a, hb)
                self._put(s, b, ha)

    @staticmethod
    def _put(s: set[int], q: int, on: bool) -> None:
        if on:
            s.add(q)
        else:
            s.discard(q)


def _walk(
    compiled: CompiledCircuit,
    start: int,
    op: _Frame,
    partner: int | None,
    key: Any,
    records: dict[int, list[tuple[Any, _Bits]]],
    skip_slot: int | None = None,
) -> bool:
    """Walk ``op`` backward from location ``start`` and record how it looks at each noisy location.

    A fault P at a location flips the check iff P anticommutes with the
    recorded operator. Reaching the ``partner`` measurement multiplies in
    its Z; the walk ends once the partner is passed and nothing is left.
    Returns False if an INIT met an X component, which makes the check
    nondeterministic.
    """
    locs = compiled.locations
    clean = True
    passed = partner is None
    for idx in range(start - 1, -1, -1):
        loc = locs[idx]
        if loc.slot == skip_slot:
            continue
        g = loc.gate
        if g.kind is GateKind.MEASURE and loc.measurement == partner:
            op.z ^= {g.qubits[0]}
            passed = True
        if loc.each > 0 and any(q in op.x or q in op.z for q in g.qubits):
            records.setdefault(idx, []).append((key, op.bits(g.qubits)))
        if g.kind is GateKind.INIT:
            (q,) = g.qubits
            if q in op.x:
                clean = False
            op.x.discard(q)
            op.z.discard(q)
        elif g.kind is not GateKind.MEASURE:
            op.conjugate(loc)
        if passed and not op:
            break
    return clean


def _anticommuting(table: np.ndarray, recs: list[tuple[Any, _Bits]]) -> np.ndarray:
    """``(K, r)`` parity of each channel Pauli against each recorded operator."""
    ops = np.array([bits for _, bits in recs], dtype=bool)  # (r, arity, 2)
    return ((table[:, None, :, 0] & ops[None, :, :, 1]) ^ (table[:, None, :, 1] & ops[None, :, :, 0])).sum(axis=2) % 2


def build_nest(
    w: WholeCircuit,
    m: ErrorModel,
    window: int | None = None,
    compiled: CompiledCircuit | None = None,
    terminal: bool = True,
) -> Nest:
    """Trace every fault location to the detection vertices it flips and weight the edges.

    Faults flipping more than two vertices of one type are split into
    consecutive pairs in time order, the last odd one going to the
    boundary; the number of such locations is kept in ``diagnostics``.
    With ``terminal`` the perfect extraction at the end adds one vertex per
    stabilizer. Logical flags need a layout on ``w``.
    """
    if all(v == 0 for v in (m.one_qubit, m.two_qubit, m.init, m.measure, m.memory)):
        warnings.warn(f"noiseless model has no edge weights; weighting the nest at p={REFERENCE_P}", stacklevel=2)
        m = m.scaled(REFERENCE_P)
        compiled = None
    compiled = compiled or compile_circuit(w, m)
    locs = compiled.locations
    layout = w.layout
    layout_index = {}
    for sid, c in enumerate(w.circuits):
        layout_index[sid] = layout.stabilizers.index(c.stabilizer) if layout is not None else sid

    meas_locs: dict[int, int] = {}
    for loc in locs:
        if loc.measurement >= 0:
            meas_locs[loc.measurement] = loc.index
    per_stab: dict[int, list[int]] = {}
    for j, (sid, _) in enumerate(compiled.measurement_keys):
        per_stab.setdefault(sid, []).append(j)

    vertex_kind: dict[Vertex, str] = {}
    vertex_step: dict[Vertex, int] = {}
    records: dict[int, list[tuple[Any, _Bits]]] = {}
    noisy = []
    for sid, js in sorted(per_stab.items()):
        kind = w.circuits[sid].kind
        for k, j in enumerate(js):
            v = (sid, k)
            vertex_kind[v] = kind
            vertex_step[v] = compiled.measurement_slots[j] + 1
            start = locs[meas_locs[j]]
            op = _Frame(z={start.gate.qubits[0]})
            if start.each > 0:
                records.setdefault(start.index, []).append((v, op.bits(start.gate.qubits)))
            partner = js[k - 1] if k > 0 else None
            if not _walk(compiled, start.index, op, partner, v, records, skip_slot=start.slot):
                noisy.append(v)

    final: dict[int, tuple[str, tuple[int, ...]]] = {}
    if terminal:
        last_step = max(compiled.measurement_slots, default=-1) + 2
        for sid, js in sorted(per_stab.items()):
            spec = w.circuits[sid].stabilizer
            members = tuple(sorted(spec.data_members))
            v = (sid, len(js))
            vertex_kind[v] = spec.kind
            vertex_step[v] = last_step
            final[sid] = (spec.kind, members)
            op = _Frame(z=set(members)) if spec.kind == "Z" else _Frame(x=set(members))
            if not _walk(compiled, len(locs), op, js[-1], v, records):
                noisy.append(v)
    if noisy:
        logger.warning("%d detection vertices are not deterministic without errors: %s", len(noisy), noisy[:5])

    # Logical observables: Z on the logical-Z chain guards the Z graph, X on the logical-X chain the X graph.
    observables: dict[int, list[tuple[Any, _Bits]]] = {}
    if layout is not None:
        enc = encodability_check(layout)
        _walk(compiled, len(locs), _Frame(z=set(enc.logical_z)), None, "Z", observables)
        _walk(compiled, len(locs), _Frame(x=set(enc.logical_x)), None, "X", observables)

    # key -> (probability, probability of the logical-flipping share)
    edges: dict[tuple[str, Any, Any], tuple[float, float]] = {}
    hyper = 0
    hidden = 0
    for idx in sorted(set(records) | set(observables)):
        loc = locs[idx]
        recs = records.get(idx, [])
        obs = observables.get(idx, [])
        anti = _anticommuting(loc.table, recs) if recs else np.zeros((len(loc.paulis), 0), dtype=np.int64)
        obs_anti = _anticommuting(loc.table, obs) if obs else np.zeros((len(loc.paulis), 0), dtype=np.int64)
        # Paulis of one location exclude each other, so their shares of an edge add up.
        here: dict[tuple[str, Any, Any], tuple[float, float]] = {}
        for row, obs_row in zip(anti, obs_anti):
            flipped = [recs[i][0] for i in np.flatnonzero(row)]
            logical = {obs[i][0] for i in np.flatnonzero(obs_row)}
            for kind in ("Z", "X"):
                hit = sorted((v for v in flipped if vertex_kind[v] == kind), key=lambda v: (vertex_step[v], v))
                if not hit:
                    hidden += kind in logical
                    continue
                if len(hit) > 2:
                    hyper += 1
                pairs: list[tuple[Any, Any]] = [(hit[i], hit[i + 1]) for i in range(0, len(hit) - 1, 2)]
                if len(hit) % 2:
                    pairs.append((hit[-1], BOUNDARY))
                for n, (u, v) in enumerate(pairs):
                    key = (kind, *sorted((u, v), key=str))
                    flips = n == 0 and kind in logical
                    p_here, l_here = here.get(key, (0.0, 0.0))  # type: ignore[arg-type]
                    here[key] = (p_here + loc.each, l_here + (loc.each if flips else 0.0))  # type: ignore[index]
        for key, (p_here, l_here) in here.items():
            p_old, l_old = edges.get(key, (0.0, 0.0))
            edges[key] = (merge_probability(p_old, p_here), l_old + l_here)

    graphs = {kind: nx.Graph() for kind in ("Z", "X")}
    for v, kind in vertex_kind.items():
        graphs[kind].add_node(v)
    for kind in graphs:
        graphs[kind].add_node(BOUNDARY)
    for (kind, u, v), (p, p_logical) in edges.items():
        graphs[kind].add_edge(u, v, p=p, weight=edge_weight(p), logical=2 * p_logical > p)

    if window is None:
        window = layout.lattice.distance if layout is not None else 3
    nest = Nest(
        graphs=graphs,
        vertex_kind=vertex_kind,
        vertex_step=vertex_step,
        layout_index=layout_index,
        boundaries=correction_boundaries(w),
        window=window,
        terminal=final,
        diagnostics={
            "hyperedge_locations": hyper,
            "nondeterministic_vertices": len(noisy),
            "undetectable_logical_faults": hidden,
            "p": m.p,
        },
    )
    logger.info(
        "nest: %d vertices, %d Z edges, %d X edges, %d split hyperedges",
        len(vertex_kind),
        graphs["Z"].number_of_edges(),
        graphs["X"].number_of_edges(),
        hyper,
    )
    if hidden:
        logger.warning("%d fault mechanisms flip a logical observable without firing any vertex", hidden)
    return nest

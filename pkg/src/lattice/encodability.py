"""Code-capacity stabilizer graphs, reduced distance and logical operator representatives."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from src.lattice.layout import BOUNDARY_SIDES, StabilizerLayout, perfect_ends


@dataclass(frozen=True)
class Encodability:
    encodable: bool
    reduced_d_x: int
    reduced_d_z: int
    logical_x: tuple[int, ...]
    logical_z: tuple[int, ...]

    @property
    def reduced_distance(self) -> int:
        return min(self.reduced_d_x, self.reduced_d_z)


def _boundary_labels(layout: StabilizerLayout, kind: str) -> dict[int | str, str]:
    """Map each side and removed plaquette to the boundary component it belongs to.

    Removed plaquettes join whichever outer side they touch through dead data
    qubits; when a removal chain connects both sides they collapse into one
    component and the distance of that type drops to zero.
    """
    sides = BOUNDARY_SIDES[kind]
    g = nx.Graph()
    g.add_nodes_from([*sides, *sorted(layout.removed_homes(kind))])
    for q in layout.lattice.data_sites:
        ends = perfect_ends(layout.lattice, q, kind)
        if len(ends) == 2 and all(e in g for e in ends):
            g.add_edge(*ends)
    labels: dict[int | str, str] = {}
    for component in nx.connected_components(g):
        # Sides name their component so chains between them stay readable.
        named = [s for s in sides if s in component]
        label = named[0] if named else f"hole{min(component)}"
        labels.update((v, label) for v in component)
    return labels


def stabilizer_graph(layout: StabilizerLayout, kind: str) -> nx.Graph:
    """Graph of the stabilizers of ``kind`` plus boundary nodes.

    Every live data qubit is an edge between the two stabilizers or
    boundaries it touches (``qubit`` attribute). Paths between the two outer
    sides are logical chains of the opposite Pauli type. Boundary nodes are
    strings; stabilizer nodes are indices into ``layout.stabilizers``.
    """
    labels = _boundary_labels(layout, kind)
    node_of: dict[int | str, int | str] = dict(labels)
    for i in layout.of_kind(kind):
        for a in layout.stabilizers[i].plaquettes:
            node_of[a] = i

    g = nx.Graph()
    g.add_nodes_from(sorted(set(labels.values())))
    g.add_nodes_from(layout.of_kind(kind))
    for q in layout.live_data:
        ends = [node_of[e] for e in perfect_ends(layout.lattice, q, kind) if e in node_of]
        if len(ends) != 2 or ends[0] == ends[1]:
            continue
        u, v = ends
        if not g.has_edge(u, v):
            g.add_edge(u, v, qubit=q)
    g.graph["sides"] = tuple(labels[s] for s in BOUNDARY_SIDES[kind])
    return g


def boundary_nodes(g: nx.Graph) -> list[str]:
    return [v for v in g.nodes if isinstance(v, str)]


def path_qubits(g: nx.Graph, nodes: list) -> list[int]:
    return [g.edges[u, v]["qubit"] for u, v in zip(nodes, nodes[1:])]


def _boundary_chain(g: nx.Graph) -> tuple[int, ...]:
    a, b = g.graph["sides"]
    if a == b:
        return ()
    try:
        nodes = nx.shortest_path(g, a, b)
    except nx.NetworkXNoPath:
        return ()
    return tuple(path_qubits(g, nodes))


def encodability_check(layout: StabilizerLayout) -> Encodability:
    """Reduced distances are shortest boundary-to-boundary chains; 0 means no logical qubit.

    X errors are caught by Z stabilizers, so the X distance comes from the Z
    graph (north to south) and the Z distance from the X graph (west to east).
    """
    logical_x = _boundary_chain(stabilizer_graph(layout, "Z"))
    logical_z = _boundary_chain(stabilizer_graph(layout, "X"))
    return Encodability(
        encodable=bool(logical_x) and bool(logical_z),
        reduced_d_x=len(logical_x),
        reduced_d_z=len(logical_z),
        logical_x=logical_x,
        logical_z=logical_z,
    )

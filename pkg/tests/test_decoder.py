"""Nest construction, matching oracles, window decoding and the logical verdict."""

from __future__ import annotations

import warnings

import networkx as nx
import numpy as np
import pytest

from src.circuits import compose_all
from src.decoder import (
    BOUNDARY,
    CodeCapacityDecoder,
    GraphDistances,
    WindowDecoder,
    assess_logical,
    boundary_miscorrection,
    brute_force_matching,
    build_nest,
    decode_window,
    edge_weight,
    extract_events,
    greedy_matching,
    matching_agreement,
    merge_probability,
    mwpm,
    single_error_sweep,
)
from src.errors import DisconnectedEventError
from src.lattice import encodability_check, generate_perfect, reconfigure, single_fault_lattice
from src.noise import ErrorModel, TrialState, run_trial
from src.pauli import PauliFrame, PauliString
from src.schedule import schedule


def _whole(lattice):
    layout = reconfigure(lattice)
    return schedule(compose_all(layout), layout=layout)


@pytest.fixture(scope="module")
def perfect_d3():
    return _whole(generate_perfect(3))


@pytest.fixture(scope="module")
def silent_nest(perfect_d3):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_nest(perfect_d3, ErrorModel.lattice(0.0))


class _Table:
    """Hand-written distances for matching scenarios."""

    def __init__(self, pairs: dict[frozenset, float], boundary: dict[str, float]):
        self.pairs = pairs
        self.boundary = boundary

    def pair(self, u, v):
        return self.pairs.get(frozenset((u, v)), float("inf"))

    def to_boundary(self, u):
        return self.boundary.get(u, float("inf"))


def _random_grid(seed: int):
    rng = np.random.default_rng(seed)
    g = nx.grid_2d_graph(4, 5)
    for u, v in g.edges:
        g.edges[u, v]["weight"] = float(rng.uniform(0.5, 3.0))
    for r in range(4):
        g.add_edge((r, 0), "L", weight=float(rng.uniform(0.5, 3.0)))
    nodes = [n for n in g.nodes if n != "L"]
    k = int(rng.integers(1, 9))
    events = [nodes[i] for i in rng.choice(len(nodes), size=k, replace=False)]
    return GraphDistances(g, ["L"]), events


class TestWeights:
    def test_weight_is_log_odds(self):
        assert edge_weight(0.1) == pytest.approx(np.log(9))
        assert edge_weight(0.5) > 0

    def test_merge_of_two_mechanisms(self):
        assert merge_probability(0.1, 0.2) == pytest.approx(0.1 * 0.8 + 0.2 * 0.9)
        assert merge_probability(0.0, 0.3) == pytest.approx(0.3)


class TestEvents:
    @staticmethod
    def _trial(signs):
        log = {0: [(6 * k + 5, s) for k, s in enumerate(signs)]}
        return TrialState(PauliString.identity(4), log)

    def test_quiet_log(self):
        assert extract_events(self._trial([1, 1, 1])) == []

    def test_single_flip_gives_two_events(self):
        events = extract_events(self._trial([1, -1, 1]))
        assert [e.vertex for e in events] == [(0, 1), (0, 2)]
        assert [e.step for e in events] == [12, 18]

    def test_persistent_flip_gives_one_event(self):
        assert len(extract_events(self._trial([1, -1, -1]))) == 1

    def test_first_measurement_compared_with_plus_one(self):
        assert [e.vertex for e in extract_events(self._trial([-1, -1]))] == [(0, 0)]


class TestMatching:
    def test_adjacent_events_pair_up(self):
        d = _Table({frozenset(("a", "b")): 1.0}, {"a": 3.0, "b": 3.0})
        assert mwpm(["a", "b"], d).pairs == (("a", "b"),)

    def test_boundary_miscorrection_scenario(self):
        d = _Table({frozenset(("a", "b")): 4.0}, {"a": 1.5, "b": 1.5})
        m = mwpm(["a", "b"], d)
        assert sorted(m.boundary_matched) == ["a", "b"]
        assert m.weight == pytest.approx(3.0)

    @pytest.mark.parametrize("seed", range(40))
    def test_blossom_equals_exhaustive(self, seed: int):
        dist, events = _random_grid(seed)
        assert mwpm(events, dist).weight == pytest.approx(brute_force_matching(events, dist).weight)

    @pytest.mark.parametrize("seed", range(10))
    def test_greedy_is_never_better(self, seed: int):
        dist, events = _random_grid(100 + seed)
        assert greedy_matching(events, dist).weight >= mwpm(events, dist).weight - 1e-9

    def test_every_event_is_covered(self):
        dist, events = _random_grid(7)
        m = mwpm(events, dist)
        covered = [a for a, _ in m.pairs] + [b for _, b in m.pairs if b is not None]
        assert sorted(covered, key=str) == sorted(events, key=str)

    def test_isolated_event(self):
        g = nx.Graph()
        g.add_node("lonely")
        with pytest.raises(DisconnectedEventError):
            mwpm(["lonely"], GraphDistances(g, []))

    def test_empty(self):
        assert mwpm([], _Table({}, {})).pairs == ()


class TestNest:
    @pytest.fixture(scope="class")
    def nest(self, perfect_d3):
        return build_nest(perfect_d3, ErrorModel.lattice(0.001))

    def test_edge_probabilities(self, nest):
        for g in nest.graphs.values():
            for _, _, data in g.edges(data=True):
                assert 0 < data["p"] <= 0.5
                assert data["weight"] > 0

    def test_measurement_flip_is_time_like(self, nest, perfect_d3):
        sid = next(s for s, c in enumerate(perfect_d3.circuits) if c.kind == "Z")
        assert nest.graph("Z").has_edge((sid, 1), (sid, 2))

    def test_data_error_joins_neighbouring_checks(self, nest, perfect_d3):
        layout = perfect_d3.layout
        q = layout.lattice.site(2, 2)
        a, b = (sid for sid, c in enumerate(perfect_d3.circuits) if c.kind == "Z" and q in c.stabilizer.data_members)
        g = nest.graph("Z")
        assert any(g.has_edge((a, i), (b, j)) for i in range(4) for j in range(4))

    def test_every_vertex_reaches_the_boundary(self, nest):
        for kind, g in nest.graphs.items():
            assert nx.is_connected(g), kind

    def test_terminal_vertices(self, nest, perfect_d3):
        assert set(nest.terminal) == set(range(len(perfect_d3.circuits)))

    def test_noiseless_model_warns(self, perfect_d3):
        with pytest.warns(UserWarning):
            build_nest(perfect_d3, ErrorModel.lattice(0.0))

    def test_exclusive_paulis_of_one_location_add_up(self, perfect_d3):
        # X and Y before a Z-basis measurement flip the same outcome.
        m = ErrorModel(p=0.2, one_qubit=0.0, two_qubit=0.0, init=0.0, measure=0.2, measure_paulis="XY")
        nest = build_nest(perfect_d3, m)
        sid = next(s for s, c in enumerate(perfect_d3.circuits) if c.kind == "Z")
        assert nest.graph("Z").edges[(sid, 1), (sid, 2)]["p"] == pytest.approx(0.2)

    def test_superunit_vertex_has_more_edges(self):
        w = _whole(single_fault_lattice(5, "center"))
        nest = build_nest(w, ErrorModel.lattice(0.001))
        su = next(s for s, c in enumerate(w.circuits) if c.kind == "Z" and c.stabilizer.is_superunit)
        bulk = next(
            s
            for s, c in enumerate(w.circuits)
            if c.kind == "Z" and len(c.stabilizer.data_members) == 4 and not c.stabilizer.is_superunit
        )
        assert nest.degree((su, 1)) > nest.degree((bulk, 1))


class TestWindowDecoding:
    def test_no_events_no_correction(self, perfect_d3, silent_nest):
        t = run_trial(perfect_d3, ErrorModel.lattice(0.0))
        assert decode_window(t, silent_nest, perfect_d3.layout).is_identity

    def test_single_data_error_is_cancelled(self, perfect_d3, silent_nest):
        layout = perfect_d3.layout
        n = layout.lattice.n_sites
        q = layout.lattice.site(2, 2)
        err = PauliString.from_sparse(n, {q: "X"})
        t = run_trial(perfect_d3, ErrorModel.lattice(0.0), injections={perfect_d3.horizon // 2: err})
        frame = decode_window(t, silent_nest, layout)
        assert np.flatnonzero(frame.x).tolist() == [q]
        assert not frame.z.any()
        assert frame.compose(frame).is_identity

    @pytest.mark.parametrize("letter", ["X", "Z", "Y"])
    def test_no_single_data_error_is_logical(self, perfect_d3, silent_nest, letter: str):
        layout = perfect_d3.layout
        n = layout.lattice.n_sites
        decoder = WindowDecoder(silent_nest, layout)
        for slot in (0, perfect_d3.horizon // 3, perfect_d3.horizon // 2):
            for q in layout.live_data:
                err = PauliString.from_sparse(n, {q: letter})
                t = run_trial(perfect_d3, ErrorModel.lattice(0.0), injections={slot: err})
                outcome = assess_logical(t, decoder.decode(t), layout, decoder.code)
                assert not outcome.merged, (letter, slot, q)


class TestAssess:
    @pytest.fixture(scope="class")
    def layout(self):
        return reconfigure(generate_perfect(5))

    def test_stabilizer_residual_is_harmless(self, layout):
        n = layout.lattice.n_sites
        t = TrialState(layout.stabilizers[7].operator(n), {})
        outcome = assess_logical(t, PauliFrame.empty(n), layout)
        assert not outcome.x_error and not outcome.z_error

    def test_logical_chain_is_an_x_error(self, layout):
        n = layout.lattice.n_sites
        chain = PauliString.on(n, "X", encodability_check(layout).logical_x)
        outcome = assess_logical(TrialState(chain, {}), PauliFrame.empty(n), layout)
        assert outcome.x_error and not outcome.z_error and outcome.merged

    def test_two_errors_corrected_at_distance_five(self, layout):
        n = layout.lattice.n_sites
        err = PauliString.from_sparse(n, {layout.lattice.site(2, 2): "X", layout.lattice.site(6, 4): "Z"})
        assert not assess_logical(TrialState(err, {}), PauliFrame.empty(n), layout).merged

    def test_frame_undoes_residual(self, layout):
        n = layout.lattice.n_sites
        q = layout.lattice.site(4, 4)
        frame = PauliFrame.empty(n)
        frame.flip("Y", [q])
        t = TrialState(PauliString.from_sparse(n, {q: "Y"}), {})
        assert not assess_logical(t, frame, layout).merged

    def test_code_capacity_chain_to_boundary(self, layout):
        code = CodeCapacityDecoder(layout)
        z0 = layout.of_kind("Z")[0]
        assert len(code.chain("Z", z0)) == 1


def test_boundary_constant():
    assert BOUNDARY == "B"


class TestBench:
    def test_matching_agreement(self):
        result = matching_agreement(instances=200, seed=3)
        assert result.cases == 200
        assert result.passed, result.failures[:3]

    def test_boundary_scenario(self):
        assert boundary_miscorrection().passed

    def test_single_error_sweep_perfect_d5(self):
        whole = _whole(generate_perfect(5))
        result = single_error_sweep(whole, slots=[whole.horizon // 2])
        assert result.cases == 2 * len(whole.layout.live_data)
        assert result.passed, result.failures[:3]

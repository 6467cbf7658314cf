"""Whole-circuit scheduling, cycles and replay of the woven circuit."""

from __future__ import annotations

import pytest

from src.circuits import GateEvent, StabilizerCircuit, Tag, compose_all
from src.errors import HorizonError, InsufficientHorizonError, InvalidParameterError
from src.lattice import StabilizerSpec, generate_perfect, reconfigure, single_fault_lattice
from src.pauli import cnot, h, init, measure
from src.schedule import (
    Instance,
    ScheduledEvent,
    WholeCircuit,
    correction_boundaries,
    cycle_of,
    default_horizon,
    error_correction_cycle,
    load_whole_circuit,
    mean_correction_cycle,
    no_double_booking,
    priority_order,
    save_whole_circuit,
    schedule,
    verify_whole_circuit,
)


def _whole(lattice):
    layout = reconfigure(lattice)
    return schedule(compose_all(layout), layout=layout)


@pytest.fixture(scope="module")
def perfect_d3():
    return _whole(generate_perfect(3))


@pytest.fixture(scope="module")
def center_d5():
    return _whole(single_fault_lattice(5, "center"))


class TestSingleStabilizer:
    @pytest.fixture
    def circuit(self):
        layout = reconfigure(generate_perfect(3))
        return compose_all(layout)[0]

    def test_back_to_back_cycle_equals_depth(self, circuit):
        w = schedule([circuit], max_steps=10 * circuit.depth)
        assert cycle_of(w, 0) == circuit.depth
        assert len(w.instances) == 10

    def test_horizon_too_short(self, circuit):
        with pytest.raises(HorizonError):
            schedule([circuit], max_steps=circuit.depth - 1)

    def test_one_measurement_has_no_cycle(self, circuit):
        w = schedule([circuit], max_steps=circuit.depth)
        with pytest.raises(InsufficientHorizonError):
            cycle_of(w, 0)

    def test_needs_horizon_or_layout(self, circuit):
        with pytest.raises(InvalidParameterError):
            schedule([circuit])


class TestPerfectLattice:
    def test_no_qubit_is_double_booked(self, perfect_d3):
        assert no_double_booking(perfect_d3)

    def test_every_instance_measures_its_stabilizer(self, perfect_d3):
        assert verify_whole_circuit(perfect_d3) == []

    def test_every_stabilizer_repeats(self, perfect_d3):
        assert all(n >= 2 for n in perfect_d3.metadata["instances_per_stabilizer"].values())

    def test_priority_starts_with_deepest(self, perfect_d3):
        order = priority_order(perfect_d3.circuits)
        assert perfect_d3.circuits[order[0]].depth == max(c.depth for c in perfect_d3.circuits)

    def test_start_up_round_is_nine_steps(self, perfect_d3):
        assert correction_boundaries(perfect_d3)[:3] == [0, 9, 16]
        assert error_correction_cycle(perfect_d3) == round(mean_correction_cycle(perfect_d3))

    def test_boundaries_increase(self, perfect_d3):
        b = correction_boundaries(perfect_d3)
        assert b[0] == 0 and len(b) >= 3
        assert all(x < y for x, y in zip(b, b[1:]))


class TestFaultyLattice:
    def test_superunits_still_measure_their_operators(self, center_d5):
        assert no_double_booking(center_d5)
        assert verify_whole_circuit(center_d5) == []

    def test_fault_slows_the_correction_cycle(self, center_d5):
        assert mean_correction_cycle(center_d5) > mean_correction_cycle(_whole(generate_perfect(5)))

    def test_superunit_cycle_is_at_least_its_depth(self, center_d5):
        for sid, c in enumerate(center_d5.circuits):
            if c.stabilizer.is_superunit:
                assert cycle_of(center_d5, sid) >= c.depth


def _two_qubit_pair() -> list[StabilizerCircuit]:
    """Z0Z1 read by ancilla 2 and X0X1 read by ancilla 3, gathering the shared qubits in opposite orders."""
    z = StabilizerSpec("Z", frozenset({0, 1}), frozenset({2}), plaquettes=(2,))
    x = StabilizerSpec("X", frozenset({0, 1}), frozenset({3}), plaquettes=(3,))
    z_gates = [(init(2), Tag.INIT), (cnot(0, 2), Tag.GATHER), (cnot(1, 2), Tag.GATHER), (measure(2), Tag.MEASURE)]
    x_gates = [
        (init(3), Tag.INIT),
        (h(3), Tag.H),
        (cnot(3, 1), Tag.GATHER),
        (cnot(3, 0), Tag.GATHER),
        (h(3), Tag.H),
        (measure(3), Tag.MEASURE),
    ]
    return [
        StabilizerCircuit(s, [GateEvent(g, k, tag) for k, (g, tag) in enumerate(gates)], len(gates), (anc,))
        for s, gates, anc in ((z, z_gates, 2), (x, x_gates, 3))
    ]


class TestSharedQubitOrder:
    def test_opposite_type_pairs_gather_shared_qubits_in_one_order(self):
        w = schedule(_two_qubit_pair(), max_steps=40)
        assert no_double_booking(w)
        assert verify_whole_circuit(w) == []
        zs = [i for i in w.instances if i.kind == "Z"]
        xs = [i for i in w.instances if i.kind == "X"]
        for zi in zs:
            for xi in xs:
                if zi.end < xi.start or xi.end < zi.start:
                    continue
                first = {q: zi.gather_times[q] < xi.gather_times[q] for q in (0, 1)}
                assert first[0] == first[1]

    def test_crossed_order_corrupts_both_measurements(self):
        z_circuit, x_circuit = _two_qubit_pair()
        # Z gathers qubit 0 before X does but qubit 1 after it.
        z_slots = [0, 1, 3, 4]
        x_slots = [0, 1, 2, 3, 4, 5]
        instances = [
            Instance(
                sid,
                c.kind,
                0,
                slots[-1],
                slots[-1],
                [ScheduledEvent(e.gate, t, sid, sid, e.tag) for e, t in zip(c.events, slots)],
                {c.gather_member(e): t for e, t in zip(c.events, slots) if e.tag == Tag.GATHER},
            )
            for sid, (c, slots) in enumerate(((z_circuit, z_slots), (x_circuit, x_slots)))
        ]
        w = WholeCircuit([z_circuit, x_circuit], horizon=6, instances=instances, n_qubits=4)
        assert no_double_booking(w)
        assert verify_whole_circuit(w) == [0, 1]


class TestCorrectionCycle:
    @pytest.mark.parametrize("d", [5, 7, 9])
    def test_perfect_lattice_runs_in_eight_steps(self, d):
        assert 7.9 <= mean_correction_cycle(_whole(generate_perfect(d))) <= 8.2

    @pytest.mark.parametrize("where", ["center", "west", "northwest"])
    @pytest.mark.parametrize("d", [5, 7])
    def test_single_fault_band(self, d, where):
        assert 28 <= mean_correction_cycle(_whole(single_fault_lattice(d, where))) <= 36


class TestHorizon:
    @pytest.mark.parametrize("d", [3, 5])
    def test_default_horizon_holds_d_plus_two_rounds(self, d):
        w = _whole(generate_perfect(d))
        bounds = correction_boundaries(w)
        assert len(bounds) - 1 == d + 2
        assert w.horizon == bounds[-1]

    def test_faulty_horizon_ends_on_a_round(self, center_d5):
        bounds = correction_boundaries(center_d5)
        assert len(bounds) - 1 == 7
        assert center_d5.horizon == bounds[-1]

    def test_cycles_override(self):
        layout = reconfigure(generate_perfect(3))
        circuits = compose_all(layout)
        w = schedule(circuits, max_steps=default_horizon(layout, circuits, cycles=3), layout=layout)
        assert len(correction_boundaries(w)) == 4

    def test_rejects_zero_rounds(self):
        layout = reconfigure(generate_perfect(3))
        with pytest.raises(InvalidParameterError):
            default_horizon(layout, compose_all(layout), cycles=0)


def test_whole_circuit_round_trip(tmp_path, perfect_d3):
    back = load_whole_circuit(save_whole_circuit(perfect_d3, tmp_path / "whole.json"))
    assert back.events == perfect_d3.events
    assert back.horizon == perfect_d3.horizon
    assert [i.measure_slot for i in back.instances] == [i.measure_slot for i in perfect_d3.instances]

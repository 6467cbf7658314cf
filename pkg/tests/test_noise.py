"""Error model channels and Monte Carlo sweeps of whole circuits."""

from __future__ import annotations

import numpy as np
import pytest

from src.circuits import Tag, compose_all
from src.errors import DimensionMismatchError, InvalidParameterError
from src.lattice import generate_perfect, reconfigure, single_fault_lattice
from src.noise import ErrorModel, compile_circuit, compile_events, run_trial, sample_channel, simulate, sweep
from src.noise.model import TWO_QUBIT_PAULIS
from src.pauli import GateKind, PauliString, cnot, measure
from src.schedule import schedule


@pytest.fixture(scope="module")
def whole():
    layout = reconfigure(generate_perfect(3))
    return schedule(compose_all(layout), layout=layout)


class TestErrorModel:
    def test_lattice_preset_channels(self):
        m = ErrorModel.lattice(0.003)
        assert m.channel(GateKind.CNOT) == (TWO_QUBIT_PAULIS, pytest.approx(0.0002))
        assert m.channel(GateKind.H) == (("X", "Y", "Z"), pytest.approx(0.001))
        assert m.channel(GateKind.MEASURE) == (("X",), pytest.approx(0.003))
        assert m.channel(GateKind.IDENTITY, wait=True) == ((), 0.0)

    def test_purification_preset(self):
        m = ErrorModel.purification(0.003)
        paulis, each = m.channel(GateKind.INIT)
        assert paulis == ("X", "Y", "Z") and each == pytest.approx(0.001)
        assert m.channel(GateKind.IDENTITY, wait=True)[1] == pytest.approx(0.001)

    def test_fifteen_two_qubit_paulis(self):
        assert len(TWO_QUBIT_PAULIS) == 15 and "II" not in TWO_QUBIT_PAULIS

    @pytest.mark.parametrize("p", [-0.1, 1.5])
    def test_rejects_out_of_range(self, p: float):
        with pytest.raises(InvalidParameterError):
            ErrorModel.lattice(p)

    def test_scaled_keeps_preset(self):
        assert ErrorModel.purification(0.01).scaled(0.02) == ErrorModel.purification(0.02)

    def test_sample_channel_frequency(self):
        m = ErrorModel.lattice(0.3)
        rng = np.random.default_rng(5)
        hits = sum(sample_channel(GateKind.H, m, rng).weight for _ in range(4000))
        assert 0.25 < hits / 4000 < 0.35


class TestSweep:
    def test_noiseless_run_is_silent(self, whole):
        t = run_trial(whole, ErrorModel.lattice(0.0), rng=1)
        assert all(sign == 1 for log in t.syndrome_log.values() for _, sign in log)
        assert t.residual.weight == 0

    def test_injected_data_error_flips_neighbouring_z_checks(self, whole):
        layout = whole.layout
        n = layout.lattice.n_sites
        q = layout.lattice.site(2, 2)
        t = run_trial(whole, ErrorModel.lattice(0.0), injections={0: PauliString.from_sparse(n, {q: "X"})})
        flipped = {sid for sid, log in t.syndrome_log.items() if log[-1][1] == -1}
        holders = {sid for sid, c in enumerate(whole.circuits) if c.kind == "Z" and q in c.stabilizer.data_members}
        assert flipped == holders
        assert t.residual.letter(q) == "X"

    def test_seeded_batches_are_reproducible(self, whole):
        m = ErrorModel.lattice(0.01)
        a = simulate(whole, m, 64, seed=9, chunk=16)
        b = simulate(whole, m, 64, seed=9, chunk=64)
        assert np.array_equal(a.flips, b.flips)
        assert np.array_equal(a.residual_x, b.residual_x)

    def test_batch_trial_matches_single_trial_stream(self, whole):
        m = ErrorModel.lattice(0.02)
        batch = simulate(whole, m, 3, seed=4, lattice_id=2)
        assert batch.trial(1).seed_key == (4, 2, 1)
        assert len(list(batch)) == 3

    def test_measurement_error_rate(self, whole):
        m = ErrorModel(p=0.1, one_qubit=0.0, two_qubit=0.0, init=0.0, measure=0.1)
        batch = simulate(whole, m, 400, seed=3)
        assert 0.07 < batch.flips.mean() < 0.13

    def test_compiled_locations_follow_slots(self, whole):
        compiled = compile_circuit(whole, ErrorModel.lattice(0.001))
        slots = [loc.slot for loc in compiled.locations]
        assert slots == sorted(slots)
        assert compiled.n_measurements == len(whole.instances)

    def test_starting_frames_propagate(self):
        events = [(1, cnot(0, 1), False, 0), (2, measure(1), False, 1)]
        compiled = compile_events(events, 2, ErrorModel.lattice(0.0))
        x0 = np.array([[True, False], [False, False]])
        flips, x, _ = sweep(compiled, None, 2, frames=(x0, np.zeros_like(x0)))
        assert flips[:, 0].tolist() == [True, False]
        assert x[:, 0].tolist() == [True, False]
        assert not x[:, 1].any()
        assert compiled.measurement_keys == [(1, 0)]

    def test_starting_frames_shape_checked(self):
        compiled = compile_events([(1, cnot(0, 1), False, 0)], 2, ErrorModel.lattice(0.0))
        with pytest.raises(DimensionMismatchError):
            sweep(compiled, None, 3, frames=(np.zeros((2, 2), bool), np.zeros((2, 2), bool)))

    @pytest.mark.parametrize("p_low, p_high", [(0.001, 0.004), (0.004, 0.016)])
    def test_error_counts_rise_with_p(self, whole, p_low: float, p_high: float):
        low = simulate(whole, ErrorModel.lattice(p_low), 200, seed=5)
        high = simulate(whole, ErrorModel.lattice(p_high), 200, seed=5)
        assert high.flips.mean() > low.flips.mean()
        assert (high.residual_x | high.residual_z).sum() > (low.residual_x | low.residual_z).sum()


class TestSuperunitPropagation:
    @pytest.fixture(scope="class")
    def center_d5(self):
        layout = reconfigure(single_fault_lattice(5, "center"))
        return schedule(compose_all(layout), layout=layout)

    def test_ancilla_z_part_way_through_gather_lands_on_later_members(self, center_d5):
        w = center_d5
        sid = next(i for i, c in enumerate(w.circuits) if c.kind == "Z" and c.stabilizer.is_superunit)
        inst = w.instances_of(sid)[0]
        gathers = sorted((e for e in inst.events if e.tag == Tag.GATHER), key=lambda e: e.slot)
        k = len(gathers) // 2
        fault = gathers[k]
        t = run_trial(
            w,
            ErrorModel.lattice(0.0),
            injections={fault.slot: PauliString.from_sparse(w.n_qubits, {fault.qubits[1]: "Z"})},
        )
        data = set(w.layout.lattice.data_sites)
        hit = {q for q in t.residual.support if q in data}
        assert hit == {e.qubits[0] for e in gathers[k:]}
        assert all(t.residual.letter(q) == "Z" for q in hit)
        # Z on the carrier commutes with its own Z readout.
        assert all(sign == 1 for _, sign in t.syndrome_log[sid])

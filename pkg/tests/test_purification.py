"""Raw pairs, purification rounds, the exact oracle, schemes and ledgers."""

from __future__ import annotations

import numpy as np
import pytest

from src.codes import get_code, physical_code
from src.errors import DimensionMismatchError, InvalidParameterError, RetryCapError
from src.noise import ErrorModel
from src.purification import (
    CSV_HEADER,
    REFERENCE_ROUND_ZERO,
    EncodedPairState,
    RawPairModel,
    ResourceLedger,
    Scheme,
    closed_form_fidelity,
    encode_half,
    encoding_ledger,
    exact_purification_oracle,
    judge,
    local_gate_ops,
    make_raw_pair,
    make_raw_pair_local_gates,
    ops_ledger,
    physical_round_ops,
    purification_table,
    purify_encoded,
    purify_physical,
    read_csv,
    round_zero_ledger,
    run_scheme,
    success_probability,
    write_csv,
)

QUIET = ErrorModel.purification(0.0)


def _physical(batch: int, x_b: bool = False, z_b: bool = False) -> EncodedPairState:
    phys = physical_code()
    s = EncodedPairState.perfect(phys, phys, batch)
    s.x[:, 1] = x_b
    s.z[:, 1] = z_b
    return s


class TestRawPairs:
    def test_optical_model(self):
        model = RawPairModel.optical()
        assert model.fidelity == 0.85
        assert model.probabilities.tolist() == pytest.approx([0.85, 0.055, 0.055, 0.04])

    def test_werner(self):
        assert RawPairModel.werner(0.7).probabilities.tolist() == pytest.approx([0.7, 0.1, 0.1, 0.1])

    def test_rejects_bad_distribution(self):
        with pytest.raises(InvalidParameterError):
            RawPairModel(0.9, 0.1, 0.1, 0.0)

    def test_sampled_frequencies(self):
        n = 200_000
        s = make_raw_pair(RawPairModel.optical(), n, rng=11)
        x, z = s.x[:, 1], s.z[:, 1]
        freq = [(~x & ~z).mean(), (x & ~z).mean(), (x & z).mean(), (~x & z).mean()]
        for f, p in zip(freq, [0.85, 0.055, 0.055, 0.04]):
            assert f == pytest.approx(p, abs=4 * np.sqrt(p * (1 - p) / n))
        assert not s.x[:, 0].any() and not s.z[:, 0].any()

    def test_perfect_source(self):
        s = make_raw_pair(RawPairModel.werner(1.0), 1000, ErrorModel.purification(0.0), rng=2)
        assert not s.x.any() and not s.z.any()

    def test_local_gates_noiseless(self):
        s = make_raw_pair_local_gates(QUIET, 500, rng=3)
        assert judge(s).merged == 0.0

    def test_local_gates_error_rate(self):
        p = 1e-3
        s = make_raw_pair_local_gates(ErrorModel.purification(p), 200_000, rng=4)
        assert judge(s).merged == pytest.approx(0.00736, abs=0.0015)

    def test_local_gates_scale_with_p(self):
        hi = judge(make_raw_pair_local_gates(ErrorModel.purification(1e-2), 50_000, rng=5)).merged
        lo = judge(make_raw_pair_local_gates(ErrorModel.purification(1e-3), 50_000, rng=5)).merged
        assert 5 < hi / lo < 20


class TestPhysicalRound:
    def test_single_z_survives_and_toggles(self):
        r = purify_physical(_physical(3, z_b=True), _physical(3), QUIET, rng=0)
        assert r.kept.all()
        assert r.pairs.x[:, 1].all() and not r.pairs.z.any()

    def test_without_toggle_z_stays_z(self):
        r = purify_physical(_physical(3, z_b=True), _physical(3), QUIET, basis_toggle=False, rng=0)
        assert r.pairs.z[:, 1].all() and not r.pairs.x.any()

    def test_two_z_cancel(self):
        r = purify_physical(_physical(2, z_b=True), _physical(2, z_b=True), QUIET, rng=0)
        assert r.successes == 2
        assert not r.pairs.x.any() and not r.pairs.z.any()

    def test_single_x_discarded(self):
        r = purify_physical(_physical(4, x_b=True), _physical(4), QUIET, rng=0)
        assert r.successes == 0 and len(r.pairs) == 0

    def test_both_x_pass_undetected(self):
        r = purify_physical(_physical(2, x_b=True), _physical(2, x_b=True), QUIET, rng=0)
        assert r.successes == 2

    def test_werner_success_rate(self):
        model = RawPairModel.werner(0.85)
        a = make_raw_pair(model, 100_000, rng=7)
        b = make_raw_pair(model, 100_000, rng=8)
        r = purify_physical(a, b, QUIET, rng=9)
        assert r.successes / r.attempts == pytest.approx(0.82, abs=0.005)

    def test_mismatched_batches(self):
        with pytest.raises(DimensionMismatchError):
            purify_physical(_physical(2), _physical(3), QUIET)


class TestOracle:
    def test_first_round_success(self):
        result = exact_purification_oracle(RawPairModel.werner(0.85), 1)
        assert result.success[0] == pytest.approx(0.82)
        assert success_probability(0.85) == pytest.approx(0.82)

    def test_two_rounds(self):
        result = exact_purification_oracle(RawPairModel.werner(0.85), 2)
        assert result.fidelity == pytest.approx(0.97163, abs=1e-4)
        assert result.success[1] == pytest.approx(0.80458, abs=1e-4)
        assert result.inefficiency == pytest.approx(4 / (0.82 * 0.80458), rel=1e-4)

    def test_closed_form(self):
        assert closed_form_fidelity(0.85) == pytest.approx(0.7225 / 0.745)
        assert closed_form_fidelity(0.85) == pytest.approx(0.96980, abs=1e-5)

    def test_perfect_pairs_stay_perfect(self):
        result = exact_purification_oracle(RawPairModel.werner(1.0), 3)
        assert result.fidelity == 1.0 and result.success == [1.0, 1.0, 1.0]

    def test_distribution_normalised(self):
        dist = exact_purification_oracle(RawPairModel.optical(), 4).distribution
        assert dist.sum() == pytest.approx(1.0)

    def test_monte_carlo_agrees(self):
        model = RawPairModel.werner(0.85)
        exact = exact_purification_oracle(model, 2)
        res = run_scheme("physical", rounds=2, m=QUIET, raw_model=model, trials=20_000, seed=1)
        assert 1 - res.rates.merged == pytest.approx(exact.fidelity, abs=0.005)
        assert res.success == pytest.approx(exact.success, abs=0.01)
        assert res.ledger.inefficiency == pytest.approx(exact.inefficiency, rel=0.02)


class TestEncoding:
    def test_noiseless_encoding_keeps_correlations(self):
        s = encode_half(_physical(4), get_code("steane"), "A", QUIET, rng=1)
        s = encode_half(s, get_code("surface3"), "B", QUIET, rng=2)
        assert s.width == 20
        assert judge(s).merged == 0.0

    def test_discrepancy_becomes_logical(self):
        s = encode_half(_physical(3, x_b=True), get_code("steane"), "B", QUIET, rng=1)
        ex, ez = s.logical_errors()
        assert ex.all() and not ez.any()

    def test_cannot_encode_twice(self):
        s = encode_half(_physical(1), get_code("steane"), "A", QUIET)
        with pytest.raises(InvalidParameterError):
            encode_half(s, get_code("steane"), "A", QUIET)

    def test_heterogeneous_encoding_error(self):
        s = make_raw_pair(RawPairModel.optical(), 20_000, rng=3)
        s = encode_half(s, get_code("steane"), "A", ErrorModel.purification(1e-3), rng=4)
        s = encode_half(s, get_code("surface3"), "B", ErrorModel.purification(1e-3), rng=5)
        assert 0.15 < judge(s).merged < 0.22


class TestEncodedRound:
    @pytest.fixture
    def steane_pairs(self):
        steane = get_code("steane")
        return EncodedPairState.perfect(steane, steane, 4), EncodedPairState.perfect(steane, steane, 4)

    def test_clean_pairs_kept(self, steane_pairs):
        a, b = steane_pairs
        assert purify_encoded(a, b, QUIET, 0, strict=True, rng=0).kept.all()

    def test_correctable_error_strictness(self, steane_pairs):
        a, b = steane_pairs
        b.x[:, 0] = True
        assert purify_encoded(a, b, QUIET, 0, rng=0).kept.all()
        assert not purify_encoded(a, b, QUIET, 0, strict=True, rng=0).kept.any()

    def test_logical_error_discarded(self, steane_pairs):
        a, b = steane_pairs
        b.x[:, [1, 2, 3]] = True
        assert not purify_encoded(a, b, QUIET, 0, rng=0).kept.any()

    def test_x_round_ignores_x_errors(self, steane_pairs):
        a, b = steane_pairs
        b.x[:, [1, 2, 3]] = True
        r = purify_encoded(a, b, QUIET, 1, rng=0)
        assert r.kept.all()
        # the reversed CNOT copies pair 2's X onto pair 1
        ex, _ = r.pairs.logical_errors()
        assert ex.all()

    def test_z_round_catches_z_logical(self, steane_pairs):
        a, b = steane_pairs
        b.z[:, [3, 4, 5]] = True
        assert not purify_encoded(a, b, QUIET, 1, rng=0).kept.any()


class TestLedger:
    def test_physical_round_cost(self):
        assert ops_ledger(physical_round_ops(), 4) == ResourceLedger(0.0, 8.0, 4.0, 2.0)

    def test_encoding_cost(self):
        assert encoding_ledger(get_code("steane")).kq == 42
        assert encoding_ledger(get_code("steane")).two_qubit_gates == 11
        assert encoding_ledger(get_code("surface3")) == ResourceLedger(0.0, 250.0, 218.0, 16.0)
        assert encoding_ledger(physical_code()) == ResourceLedger()

    def test_every_qubit_step_holds_one_gate(self):
        for ledger in [*REFERENCE_ROUND_ZERO.values(), encoding_ledger(get_code("steane"))]:
            assert ledger.kq == ledger.single_qubit_gates + 2 * ledger.two_qubit_gates

    def test_round_zero_counts_unlisted_pairs_from_circuits(self):
        steane = get_code("steane")
        assert round_zero_ledger(steane, steane, [], hold_steps=2) == ResourceLedger(1.0, 88.0, 44.0, 22.0)

    def test_local_source_adds_preparation_gates(self):
        a, b = get_code("steane"), get_code("surface3")
        local = round_zero_ledger(a, b, local_gate_ops(2), hold_steps=2)
        assert local == ResourceLedger(1.0, 5402.0, 4134.0, 636.0)

    def test_recursion(self):
        raw = ResourceLedger(1.0, 4.0, 4.0, 0.0)
        out = raw.after_round(ResourceLedger(0.0, 8.0, 2.0, 2.0), 0.5)
        assert out == ResourceLedger(4.0, 32.0, 20.0, 4.0)

    def test_rejects_zero_success(self):
        with pytest.raises(InvalidParameterError):
            ResourceLedger(1.0).after_round(ResourceLedger(), 0.0)


class TestSchemes:
    def test_round_zero_ledger(self):
        res = run_scheme("before", ("steane", "surface3"), 0, m=QUIET, trials=200, seed=1)
        assert res.ledger.inefficiency == 1.0
        assert res.ledger == ResourceLedger(1.0, 5402.0, 4130.0, 636.0)
        assert res.rates.merged == pytest.approx(0.15, abs=0.08)

    def test_physical_baseline_row0(self):
        res = run_scheme("physical", rounds=0, m=ErrorModel.purification(1e-3), trials=60_000, seed=2)
        assert res.rates.merged == pytest.approx(0.156, abs=0.008)
        assert res.ledger.inefficiency == 1.0
        assert res.ledger == ResourceLedger(1.0, 88.0, 86.0, 1.0)

    @pytest.mark.parametrize("scheme", ["after", "after-strict"])
    def test_round_zero_ledger_same_for_every_scheme(self, scheme):
        res = run_scheme(scheme, ("steane", "surface3"), 0, m=QUIET, trials=100, seed=1)
        assert res.ledger == ResourceLedger(1.0, 5402.0, 4130.0, 636.0)

    def test_purifying_before_encoding_adds_encoded_timeline(self):
        res = run_scheme("before", ("steane", "surface3"), 1, m=QUIET, trials=200, seed=7)
        assert res.ledger.kq > 5402.0
        assert res.ledger.two_qubit_gates > 636.0

    def test_physical_baseline_row1(self):
        res = run_scheme("physical", rounds=1, m=ErrorModel.purification(1e-3), trials=60_000, seed=3)
        assert res.rates.merged == pytest.approx(0.106, abs=0.012)
        assert res.ledger.inefficiency == pytest.approx(2.5, rel=0.1)

    def test_strict_not_worse(self):
        kwargs = dict(m=ErrorModel.purification(1e-3), trials=3000, seed=4)
        loose = run_scheme("after", ("steane", "surface3"), 2, **kwargs)
        strict = run_scheme("after-strict", ("steane", "surface3"), 2, **kwargs)
        assert strict.rates.merged <= loose.rates.merged + 3 * loose.rates.stderr
        assert strict.ledger.inefficiency > loose.ledger.inefficiency

    def test_seeded_runs_repeat(self):
        a = run_scheme("physical", rounds=2, m=ErrorModel.purification(1e-3), trials=500, seed=5, chunk=128)
        b = run_scheme("physical", rounds=2, m=ErrorModel.purification(1e-3), trials=500, seed=5, chunk=128)
        assert a.csv_row() == b.csv_row()

    def test_retry_cap(self):
        with pytest.raises(RetryCapError):
            run_scheme("physical", rounds=1, m=QUIET, trials=10, max_batches=0)

    def test_scheme_names(self):
        assert Scheme.parse("after-strict") is Scheme.AFTER_STRICT
        with pytest.raises(InvalidParameterError):
            Scheme.parse("sideways")

    def test_physical_scheme_takes_no_codes(self):
        with pytest.raises(InvalidParameterError):
            run_scheme("physical", ("steane", "physical"), 0, trials=10)


class TestCsv:
    def test_header_and_round_trip(self, tmp_path):
        results = purification_table("physical", max_rounds=1, m=QUIET, trials=200, seed=6)
        path = write_csv(results, tmp_path / "out" / "physical.csv")
        first = path.read_text(encoding="utf-8").splitlines()[0]
        assert first == (
            "#purification,X error rate,Z error rate,Merged error rate,"
            "Phys Bell Pair Ineff,KQ,#single qubit gate,#two qubit gate"
        )
        rows = read_csv(path)
        assert [r["#purification"] for r in rows] == ["0", "1"]
        assert list(rows[0]) == list(CSV_HEADER)
        assert [list(r.values()) for r in rows] == [res.csv_row() for res in results]

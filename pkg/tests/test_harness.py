"""Chip metrics, correlation, culling, configs and end-to-end experiment files."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from src.errors import ConfigError, InvalidParameterError
from src.harness import (
    METRIC_COLUMNS,
    RATE_COLUMNS,
    ChipMetrics,
    ExperimentConfig,
    ExperimentKind,
    LogicalRate,
    chip_specs,
    compute_metrics,
    correlate,
    cull,
    geometric_mean_rate,
    load_config,
    load_ensemble,
    logical_rate,
    pearson,
    per_cycle_rate,
    prepare_chip,
    run_experiment,
)
from src.lattice import generate_perfect, single_fault_lattice
from src.purification import CSV_HEADER

EXPERIMENTS = Path(__file__).resolve().parent.parent / "experiments"


@pytest.fixture(scope="module")
def center_d5():
    return prepare_chip(single_fault_lattice(5, "center"))


@pytest.fixture(scope="module")
def perfect_d3():
    return prepare_chip(generate_perfect(3))


def _chip(i: int, rate: float, faulty: int = 0, encodable: bool = True, y: float = 0.95, d: int = 5) -> ChipMetrics:
    c = ChipMetrics(lattice_id=i, distance=d, yield_=y, encodable=encodable, n_stabs=40, faulty_total=faulty)
    c.n_z = 100 - faulty
    if encodable:
        c.x_rates[0.002] = rate
    return c


class TestComputeMetrics:
    def test_single_central_fault(self, center_d5):
        m = compute_metrics(center_d5.layout, center_d5.whole)
        assert m.n_stabs == 38
        assert m.reduced_distance == 4
        assert m.n_z == 19
        assert m.max_dataq_z == 6
        assert m.mean_dataq_z == pytest.approx(70 / 19)
        assert m.faulty_data == 1

    def test_perfect_lattice(self):
        chip = prepare_chip(generate_perfect(5))
        m = compute_metrics(chip.layout, chip.whole)
        assert m.max_dataq_z == 4
        assert m.reduced_distance == 5
        assert m.faulty_total == 0
        assert m.encodable

    def test_cdq_is_cycle_times_data_qubits(self, center_d5):
        w = center_d5.whole
        m = compute_metrics(center_d5.layout, w)
        stats = w.cycle_stats()
        cdq = [stats[sid] * len(c.stabilizer.data_members) for sid, c in enumerate(w.circuits) if c.kind == "Z"]
        assert m.max_cdq_z == pytest.approx(max(cdq))
        assert m.mean_cdq_z == pytest.approx(sum(cdq) / len(cdq))

    def test_superunit_raises_biggest_kdq(self, center_d5, perfect_d3):
        faulty = compute_metrics(center_d5.layout, center_d5.whole)
        perfect = compute_metrics(perfect_d3.layout, perfect_d3.whole)
        assert faulty.max_kdq_z > perfect.max_kdq_z
        assert faulty.max_cycle_z >= faulty.mean_cycle_z > 0

    def test_csv_round_trip(self, center_d5, tmp_path):
        m = compute_metrics(center_d5.layout, center_d5.whole, lattice_id=4, yield_=0.95)
        path = tmp_path / "m.csv"
        row = m.to_row()
        with path.open("w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=list(row))
            writer.writeheader()
            writer.writerow(row)
        assert ChipMetrics.from_row(_read(path)[0]) == m

    def test_row_has_every_column(self, perfect_d3):
        row = compute_metrics(perfect_d3.layout, perfect_d3.whole).to_row()
        assert set(METRIC_COLUMNS) <= set(row)
        assert row["encodable"] == 1


class TestCorrelate:
    def test_collinear_and_anticollinear(self):
        ensemble = [_chip(i, 1e-3 * (i + 1), faulty=i) for i in range(6)]
        table = correlate(ensemble, "linear")
        row = table.cells[(0.95, 5)]
        assert row["faulty_total"] == pytest.approx(1.0)
        assert row["n_z"] == pytest.approx(-1.0)

    def test_zero_variance_is_undefined(self):
        table = correlate([_chip(i, 1e-3 * (i + 1), faulty=i) for i in range(4)])
        assert math.isnan(table.cells[(0.95, 5)]["n_stabs"])
        assert math.isnan(table.average["n_stabs"])

    def test_log_target(self):
        ensemble = [_chip(i, math.exp(-10 + i), faulty=i) for i in range(5)]
        table = correlate(ensemble, "log")
        assert table.cells[(0.95, 5)]["faulty_total"] == pytest.approx(1.0)
        assert table.strongest() == "faulty_total"

    def test_cells_and_average(self):
        ensemble = [_chip(i, 1e-3 * (i + 1), faulty=i, d=3) for i in range(3)]
        ensemble += [_chip(10 + i, 1e-3 * (3 - i), faulty=i, d=5) for i in range(3)]
        table = correlate(ensemble)
        assert set(table.cells) == {(0.95, 3), (0.95, 5)}
        assert table.average["faulty_total"] == pytest.approx(0.0)
        assert table.rows()[-1]["yield"] == "ave"

    def test_matches_direct_formula(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            a, b = rng.random(12), rng.random(12)
            da, db = a - a.mean(), b - b.mean()
            direct = (da * db).sum() / math.sqrt((da**2).sum() * (db**2).sum())
            assert abs(pearson(a, b) - direct) < 1e-12

    def test_needs_three_rated_lattices(self):
        ensemble = [_chip(0, 1e-3), _chip(1, 2e-3), _chip(2, 0.0, encodable=False)]
        with pytest.raises(InvalidParameterError):
            correlate(ensemble)

    def test_unknown_target(self):
        with pytest.raises(InvalidParameterError):
            correlate([_chip(i, 1e-3) for i in range(3)], "quadratic")


class TestCull:
    @pytest.fixture
    def ensemble(self):
        chips = [_chip(i, 1e-4 * (i + 1), faulty=i) for i in range(27)]
        return chips + [_chip(27 + i, 0.0, encodable=False) for i in range(3)]

    def test_zero_fraction_is_identity(self, ensemble):
        assert {c.lattice_id for c in cull(ensemble, 0.0)} == {c.lattice_id for c in ensemble}

    def test_ninety_percent_of_thirty_keeps_best_three(self, ensemble):
        assert [c.lattice_id for c in cull(ensemble, 0.9)] == [0, 1, 2]

    def test_unencodable_lattices_go_first(self, ensemble):
        kept = cull(ensemble, 0.1)
        assert len(kept) == 27
        assert all(c.encodable for c in kept)

    def test_culling_lowers_geometric_mean(self, ensemble):
        assert geometric_mean_rate(cull(ensemble, 0.5), 0.002) <= geometric_mean_rate(ensemble, 0.002)

    @pytest.mark.parametrize("fraction", [-0.1, 1.0])
    def test_fraction_range(self, ensemble, fraction: float):
        with pytest.raises(InvalidParameterError):
            cull(ensemble, fraction)

    def test_geometric_mean(self):
        chips = [_chip(0, 1e-4), _chip(1, 1e-2)]
        assert geometric_mean_rate(chips, 0.002) == pytest.approx(1e-3)
        assert math.isnan(geometric_mean_rate([], 0.002))


class TestLogicalRate:
    def test_per_cycle_rate(self):
        assert per_cycle_rate(0.0, 5) == 0.0
        assert per_cycle_rate(1 - 0.99**4, 4) == pytest.approx(0.01)
        with pytest.raises(InvalidParameterError):
            per_cycle_rate(0.1, 0)

    def test_stderr(self):
        r = LogicalRate(p=0.001, trials=400, cycles=1, x_errors=100)
        assert r.x_rate == 0.25
        assert r.x_stderr == pytest.approx(math.sqrt(0.25 * 0.75 / 400))
        assert r.per_cycle_x_stderr == pytest.approx(r.x_stderr)

    def test_noiseless_runs_have_no_errors(self, perfect_d3):
        with pytest.warns(UserWarning):
            r = logical_rate(perfect_d3, 0.0, trials=5, seed=1)
        assert r.x_errors == r.z_errors == 0
        assert r.cycles >= 1

    def test_same_seed_same_counts(self, perfect_d3):
        a = logical_rate(perfect_d3, 0.01, trials=30, seed=3)
        b = logical_rate(perfect_d3, 0.01, trials=30, seed=3)
        assert (a.x_errors, a.z_errors) == (b.x_errors, b.z_errors)

    def test_cycles_stretch_horizon(self):
        short = prepare_chip(generate_perfect(3), cycles=2)
        long = prepare_chip(generate_perfect(3), cycles=8)
        assert long.whole.horizon > short.whole.horizon
        assert long.cycles > short.cycles

    @pytest.mark.slow
    def test_distance_three_and_five_cross_between_three_and_eight_per_mille(self):
        cfg = load_config(EXPERIMENTS / "perfect_threshold.yaml")
        chips = {d: prepare_chip(generate_perfect(d)) for d in (3, 5)}
        rates = {}
        for d, chip in chips.items():
            trials = -(-20_000 // chip.cycles)
            for p in (0.003, 0.008):
                r = logical_rate(chip, p, trials, seed=11, idle=cfg.idle)
                rates[d, p] = r.per_cycle_x
        assert rates[5, 0.003] < rates[3, 0.003]
        assert rates[5, 0.008] > rates[3, 0.008]


class TestConfig:
    def test_yaml_with_exponent_floats(self, tmp_path):
        path = tmp_path / "exp.yaml"
        path.write_text("name: t\nkind: perfect\np: [1e-3, 0.002]\ndistances: [3]\n", encoding="utf-8")
        cfg = load_config(path)
        assert cfg.kind is ExperimentKind.PERFECT
        assert cfg.p == [0.001, 0.002]

    def test_json_loads_through_yaml(self, tmp_path):
        path = tmp_path / "exp.json"
        path.write_text(json.dumps({"name": "t", "kind": "purification", "p": [0.001]}), encoding="utf-8")
        assert load_config(path).kind is ExperimentKind.PURIFICATION

    def test_threshold_experiment_charges_wait_identities(self):
        assert load_config(EXPERIMENTS / "perfect_threshold.yaml").idle
        assert not ExperimentConfig.from_dict({"name": "t", "kind": "perfect", "p": [0.001]}).idle

    @pytest.mark.parametrize(
        "data",
        [
            {"name": "t", "kind": "perfect"},
            {"name": "t", "kind": "bogus", "p": [0.001]},
            {"name": "t", "kind": "perfect", "p": [0.001], "colour": "red"},
            {"name": "t", "kind": "perfect", "p": [0.001], "distances": [4]},
            {"name": "t", "kind": "perfect", "p": [1.5]},
            {"name": "t", "kind": "random", "p": [0.001], "reference_p": 0.002},
            {"name": "t", "kind": "random", "p": [0.002], "cull": [1.0]},
            {"name": "t", "kind": "perfect", "p": [0.001], "version": 2},
            {"name": "t", "kind": "perfect", "p": ["often"]},
            {"name": "t", "kind": "perfect", "p": [0.001], "policy": "hexagonal"},
            {"name": "t", "kind": "single_fault", "p": [0.001], "placements": ["east"]},
            {"name": "t", "kind": "purification", "p": [0.001], "codes": ["steane", "golay"]},
            {"name": "t", "kind": "purification", "p": [0.001], "scheme": "during"},
        ],
    )
    def test_invalid(self, data):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(data)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.yaml")

    @pytest.mark.parametrize("path", sorted(EXPERIMENTS.glob("*.yaml")), ids=lambda p: p.stem)
    def test_shipped_experiments_load(self, path: Path):
        cfg = load_config(path)
        assert cfg.name

    def test_random_lattices_are_reproducible(self):
        cfg = ExperimentConfig.from_dict(
            {"name": "r", "kind": "random", "p": [0.002], "yields": [0.9], "distances": [5], "lattices": 4}
        )
        first, second = chip_specs(cfg), chip_specs(cfg)
        assert [s.lattice.faulty for s in first] == [s.lattice.faulty for s in second]
        assert len({s.lattice.faulty for s in first}) > 1


def _read(path: Path) -> list[dict[str, str]]:
    with path.open(newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


class TestRunExperiment:
    def _perfect(self, out: Path) -> ExperimentConfig:
        return ExperimentConfig.from_dict(
            {
                "name": "perfect",
                "kind": "perfect",
                "distances": [3],
                "p": [0.003],
                "trials": 20,
                "seed": 11,
                "workers": 1,
                "output_dir": str(out),
            }
        )

    def test_perfect_files(self, tmp_path):
        result = run_experiment(self._perfect(tmp_path), progress=False)
        rates = tmp_path / "perfect_rates.csv"
        assert rates in result.outputs
        assert rates.read_text(encoding="utf-8").splitlines()[0] == ",".join(RATE_COLUMNS)
        rows = _read(rates)
        assert len(rows) == 1
        assert rows[0]["distance"] == "3"
        assert int(rows[0]["cycles"]) >= 1
        manifest = json.loads(result.manifest.read_text(encoding="utf-8"))
        assert manifest["seed"] == 11
        assert "numpy" in manifest["versions"]
        assert manifest["runtimes_s"]["total"] >= 0

    def test_fixed_seed_is_byte_identical(self, tmp_path):
        a = run_experiment(self._perfect(tmp_path / "a"), progress=False)
        b = run_experiment(self._perfect(tmp_path / "b"), progress=False)
        assert a.outputs[0].read_bytes() == b.outputs[0].read_bytes()

    def test_purification_table(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            {
                "name": "pur",
                "kind": "purification",
                "p": [0.001],
                "trials": 500,
                "max_rounds": 1,
                "seed": 5,
                "output_dir": str(tmp_path),
            }
        )
        result = run_experiment(cfg, progress=False)
        text = result.outputs[0].read_text(encoding="utf-8").splitlines()
        assert text[0] == ",".join(CSV_HEADER)
        assert len(text) == 3

    def test_random_campaign(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            {
                "name": "rnd",
                "kind": "random",
                "yields": [0.98],
                "distances": [3],
                "lattices": 4,
                "p": [0.002],
                "trials": 10,
                "cull": [0.0, 0.5],
                "workers": 1,
                "output_dir": str(tmp_path),
            }
        )
        run_experiment(cfg, progress=False)
        metrics = _read(tmp_path / "rnd_metrics.csv")
        assert len(metrics) == 4
        culls = _read(tmp_path / "rnd_cull.csv")
        assert [r["cull"] for r in culls] == ["0", "0.5"]
        assert int(culls[1]["kept"]) <= int(culls[0]["kept"])
        ensemble = load_ensemble(tmp_path / "rnd_metrics.csv", tmp_path / "rnd_rates.csv")
        assert len(ensemble) == 4
        assert all(0.002 in c.x_rates for c in ensemble if c.encodable)

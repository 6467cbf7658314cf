"""Logical error rates of chips and whole experiments written to CSV plus a JSON manifest."""

from __future__ import annotations

import csv
import json
import logging
import math
import platform
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import lru_cache
from importlib import metadata
from pathlib import Path
from typing import Any

from src import __version__
from src.circuits import compose_all
from src.decoder import WindowDecoder, assess_logical, build_nest
from src.errors import DefectQError, InvalidParameterError
from src.harness.analysis import correlate, cull, geometric_mean_rate
from src.harness.config import ExperimentConfig, ExperimentKind
from src.harness.metrics import ChipMetrics, compute_metrics, unencodable_metrics
from src.lattice import (
    Lattice,
    StabilizerLayout,
    apply_yield,
    encodability_check,
    generate_perfect,
    reconfigure,
    single_fault_lattice,
)
from src.noise import ErrorModel, compile_circuit, simulate
from src.purification import purification_table, write_csv
from src.schedule import WholeCircuit, correction_boundaries, default_horizon, schedule
from src.utils import run_parallel, stream_seed

logger = logging.getLogger(__name__)

RATE_COLUMNS = (
    "lattice_id",
    "label",
    "distance",
    "yield",
    "p",
    "trials",
    "cycles",
    "x_errors",
    "z_errors",
    "logical_x_rate",
    "logical_x_stderr",
    "per_cycle_x_rate",
    "per_cycle_x_stderr",
    "per_cycle_z_rate",
)

CULL_COLUMNS = ("yield", "distance", "p", "cull", "kept", "gmean_per_cycle_x_rate")

_VERSIONED = ("numpy", "scipy", "networkx", "PyYAML", "tqdm")


def per_cycle_rate(total: float, cycles: int) -> float:
    """Per-round rate from the rate over ``cycles`` rounds: 1 - (1 - P)^(1/R)."""
    if cycles < 1:
        raise InvalidParameterError(f"cycles must be >= 1, got {cycles}")
    if not 0.0 <= total <= 1.0:
        raise InvalidParameterError(f"rate must be in [0, 1], got {total}")
    return 1.0 - (1.0 - total) ** (1.0 / cycles)


@dataclass
class LogicalRate:
    p: float
    trials: int
    cycles: int
    x_errors: int = 0
    z_errors: int = 0
    merged_errors: int = 0

    @property
    def x_rate(self) -> float:
        return self.x_errors / self.trials

    @property
    def z_rate(self) -> float:
        return self.z_errors / self.trials

    @property
    def x_stderr(self) -> float:
        return math.sqrt(self.x_rate * (1 - self.x_rate) / self.trials)

    @property
    def per_cycle_x(self) -> float:
        return per_cycle_rate(self.x_rate, self.cycles)

    @property
    def per_cycle_z(self) -> float:
        return per_cycle_rate(self.z_rate, self.cycles)

    @property
    def per_cycle_x_stderr(self) -> float:
        # first-order propagation through 1 - (1 - P)^(1/R)
        if self.x_rate >= 1.0:
            return float("nan")
        return self.x_stderr * (1 - self.x_rate) ** (1 / self.cycles - 1) / self.cycles


@dataclass
class Chip:
    """A reconfigured, scheduled lattice ready for simulation."""

    layout: StabilizerLayout
    whole: WholeCircuit
    cycles: int


@lru_cache(maxsize=32)
def prepare_chip(lattice: Lattice, policy: str = "superunit", cycles: int | None = None) -> Chip:
    """Reconfigure, compose and schedule; ``cycles`` stretches the horizon to that many correction rounds."""
    layout = reconfigure(lattice, policy)
    if not encodability_check(layout).encodable:
        raise InvalidParameterError(f"lattice d={lattice.distance} with {len(lattice.faulty)} faults is not encodable")
    circuits = compose_all(layout)
    horizon = default_horizon(layout, circuits, cycles)
    return chip_from_whole(schedule(circuits, max_steps=horizon, layout=layout))


def chip_from_whole(whole: WholeCircuit) -> Chip:
    if whole.layout is None:
        raise InvalidParameterError("simulating logical rates needs a whole circuit with a layout")
    return Chip(whole.layout, whole, max(1, len(correction_boundaries(whole)) - 1))


def logical_rate(
    chip: Chip,
    p: float,
    trials: int,
    seed: int | None = None,
    lattice_id: int = 0,
    idle: bool = False,
    progress: bool = False,
    preset: str = "lattice",
) -> LogicalRate:
    """Simulate, window-decode and assess ``trials`` runs of ``chip`` at physical rate ``p``."""
    m = ErrorModel.from_preset(preset, p, idle=idle)
    compiled = compile_circuit(chip.whole, m)
    nest = build_nest(chip.whole, m, compiled=compiled)
    decoder = WindowDecoder(nest, chip.layout)
    batch = simulate(chip.whole, m, trials, seed=seed, lattice_id=lattice_id, compiled=compiled, progress=progress)
    out = LogicalRate(p=p, trials=trials, cycles=chip.cycles)
    for t in batch:
        outcome = assess_logical(t, decoder.decode(t), chip.layout, decoder.code)
        out.x_errors += outcome.x_error
        out.z_errors += outcome.z_error
        out.merged_errors += outcome.merged
    logger.debug("lattice %d p=%g: %d/%d X errors over %d cycles", lattice_id, p, out.x_errors, trials, chip.cycles)
    return out


@dataclass(frozen=True)
class ChipSpec:
    lattice_id: int
    label: str
    lattice: Lattice
    yield_: float = 1.0


@dataclass(frozen=True)
class WorkItem:
    chip: ChipSpec
    p: float
    trials: int
    seed: int
    policy: str
    cycles: int | None
    idle: bool = False


def _run_item(item: WorkItem) -> LogicalRate:
    chip = prepare_chip(item.chip.lattice, item.policy, item.cycles)
    return logical_rate(chip, item.p, item.trials, item.seed, item.chip.lattice_id, idle=item.idle)


def chip_specs(cfg: ExperimentConfig) -> list[ChipSpec]:
    """Lattices of the campaign with stable ids; random lattices derive their fault seed from the config seed."""
    specs: list[ChipSpec] = []
    if cfg.kind is ExperimentKind.PERFECT:
        for d in cfg.distances:
            specs.append(ChipSpec(len(specs), "perfect", generate_perfect(d)))
    elif cfg.kind is ExperimentKind.SINGLE_FAULT:
        for d in cfg.distances:
            for where in cfg.placements:
                specs.append(ChipSpec(len(specs), where, single_fault_lattice(d, where)))
    elif cfg.kind is ExperimentKind.RANDOM:
        for yi, y in enumerate(cfg.yields):
            for d in cfg.distances:
                for i in range(cfg.lattices):
                    fault_seed = int(stream_seed(cfg.seed, yi, d, i).generate_state(1)[0])
                    lattice = apply_yield(generate_perfect(d), y, fault_seed)
                    specs.append(ChipSpec(len(specs), f"y{y:g}-{i}", lattice, y))
    else:
        raise InvalidParameterError(f"{cfg.kind.value} experiments simulate no lattices")
    return specs


@dataclass
class CampaignResult:
    specs: list[ChipSpec]
    metrics: list[ChipMetrics]
    rates: dict[tuple[int, float], LogicalRate] = field(default_factory=dict)


def run_campaign(cfg: ExperimentConfig, progress: bool = True) -> CampaignResult:
    """Metrics for every chip and logical rates for every encodable (chip, p) pair, fanned out to the pool."""
    specs = chip_specs(cfg)
    metrics: list[ChipMetrics] = []
    encodable: list[ChipSpec] = []
    for spec in specs:
        try:
            chip = prepare_chip(spec.lattice, cfg.policy, cfg.cycles)
        except DefectQError as e:
            logger.info("lattice %d (%s) skipped: %s", spec.lattice_id, spec.label, e)
            metrics.append(unencodable_metrics(reconfigure(spec.lattice, cfg.policy), spec.lattice_id, spec.yield_))
            continue
        metrics.append(compute_metrics(chip.layout, chip.whole, spec.lattice_id, spec.yield_))
        encodable.append(spec)
    logger.info("%d of %d lattices are encodable", len(encodable), len(specs))

    items = [WorkItem(s, p, cfg.trials, cfg.seed, cfg.policy, cfg.cycles, cfg.idle) for s in encodable for p in cfg.p]
    results = run_parallel(_run_item, items, workers=cfg.workers, desc=cfg.name, progress=progress)
    out = CampaignResult(specs, metrics)
    by_id = {m.lattice_id: m for m in metrics}
    for item, rate in zip(items, results):
        out.rates[(item.chip.lattice_id, item.p)] = rate
        by_id[item.chip.lattice_id].x_rates[item.p] = rate.per_cycle_x
        by_id[item.chip.lattice_id].z_rates[item.p] = rate.per_cycle_z
    return out


def rate_rows(result: CampaignResult) -> list[dict[str, Any]]:
    specs = {s.lattice_id: s for s in result.specs}
    rows = []
    for (lid, p), r in sorted(result.rates.items()):
        s = specs[lid]
        rows.append(
            {
                "lattice_id": lid,
                "label": s.label,
                "distance": s.lattice.distance,
                "yield": f"{s.yield_:g}",
                "p": f"{p:g}",
                "trials": r.trials,
                "cycles": r.cycles,
                "x_errors": r.x_errors,
                "z_errors": r.z_errors,
                "logical_x_rate": f"{r.x_rate:.3e}",
                "logical_x_stderr": f"{r.x_stderr:.3e}",
                "per_cycle_x_rate": f"{r.per_cycle_x:.3e}",
                "per_cycle_x_stderr": f"{r.per_cycle_x_stderr:.3e}",
                "per_cycle_z_rate": f"{r.per_cycle_z:.3e}",
            }
        )
    return rows


def cull_rows(cfg: ExperimentConfig, metrics: Sequence[ChipMetrics]) -> list[dict[str, Any]]:
    rows = []
    for y in cfg.yields:
        for d in cfg.distances:
            cell = [m for m in metrics if m.yield_ == y and m.distance == d]
            for p in cfg.p:
                for fraction in cfg.cull:
                    kept = cull(cell, fraction, cfg.reference_p)
                    rows.append(
                        {
                            "yield": f"{y:g}",
                            "distance": d,
                            "p": f"{p:g}",
                            "cull": f"{fraction:g}",
                            "kept": sum(1 for m in kept if m.encodable),
                            "gmean_per_cycle_x_rate": f"{geometric_mean_rate(kept, p):.3e}",
                        }
                    )
    return rows


def write_rows(path: Path, columns: Sequence[str], rows: Iterable[dict[str, Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with path.open("w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=list(columns), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
    except OSError as e:
        raise OSError(f"cannot write {path}: {e}") from e
    return path


def read_rows(path: str | Path) -> list[dict[str, str]]:
    with Path(path).open(newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def load_ensemble(metrics_csv: str | Path, rates_csv: str | Path | None = None) -> list[ChipMetrics]:
    """Chip metrics from a metrics CSV, with per-cycle rates attached from a rates CSV of the same campaign."""
    ensemble = [ChipMetrics.from_row(r) for r in read_rows(metrics_csv)]
    if rates_csv is None:
        return ensemble
    by_id = {m.lattice_id: m for m in ensemble}
    for r in read_rows(rates_csv):
        chip = by_id.get(int(r["lattice_id"]))
        if chip is None:
            logger.warning("rates for unknown lattice %s ignored", r["lattice_id"])
            continue
        p = float(r["p"])
        chip.x_rates[p] = float(r["per_cycle_x_rate"])
        chip.z_rates[p] = float(r["per_cycle_z_rate"])
    return ensemble


def package_versions() -> dict[str, str]:
    out = {"python": platform.python_version(), "defectq": __version__}
    for name in _VERSIONED:
        try:
            out[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            out[name] = "missing"
    return out


@dataclass
class ExperimentResult:
    outputs: list[Path]
    manifest: Path
    runtimes: dict[str, float]


def _run_lattice_experiment(cfg: ExperimentConfig, progress: bool, runtimes: dict[str, float]) -> list[Path]:
    out_dir = cfg.output_path
    t0 = time.perf_counter()
    result = run_campaign(cfg, progress=progress)
    runtimes["simulation"] = time.perf_counter() - t0
    outputs = [write_rows(out_dir / f"{cfg.name}_rates.csv", RATE_COLUMNS, rate_rows(result))]
    if cfg.kind is ExperimentKind.PERFECT:
        return outputs

    metric_rows = [m.to_row() for m in result.metrics]
    columns = list(metric_rows[0]) if metric_rows else ["lattice_id"]
    outputs.append(write_rows(out_dir / f"{cfg.name}_metrics.csv", columns, metric_rows))
    if cfg.kind is ExperimentKind.RANDOM:
        t0 = time.perf_counter()
        outputs.append(write_rows(out_dir / f"{cfg.name}_cull.csv", CULL_COLUMNS, cull_rows(cfg, result.metrics)))
        for target in ("linear", "log"):
            try:
                table = correlate(result.metrics, target, cfg.reference_p)
            except InvalidParameterError as e:
                logger.warning("no %s correlation for %s: %s", target, cfg.name, e)
                continue
            rows = [{k: (f"{v:.4f}" if isinstance(v, float) else v) for k, v in r.items()} for r in table.rows()]
            columns = ["yield", "distance", "lattices", *table.columns]
            outputs.append(write_rows(out_dir / f"{cfg.name}_correlation_{target}.csv", columns, rows))
        runtimes["analysis"] = time.perf_counter() - t0
    return outputs


def _run_purification_experiment(cfg: ExperimentConfig, progress: bool, runtimes: dict[str, float]) -> list[Path]:
    outputs = []
    for p in cfg.p:
        t0 = time.perf_counter()
        table = purification_table(
            cfg.scheme,
            (cfg.codes[0], cfg.codes[1]),
            cfg.max_rounds,
            m=ErrorModel.purification(p),
            source=cfg.source,
            trials=cfg.trials,
            seed=cfg.seed,
            hold_steps=cfg.hold_steps,
            progress=progress,
        )
        outputs.append(write_csv(table, cfg.output_path / f"{cfg.name}_p{p:g}.csv"))
        runtimes[f"p={p:g}"] = time.perf_counter() - t0
    return outputs


def run_experiment(cfg: ExperimentConfig, progress: bool = True) -> ExperimentResult:
    """Run ``cfg`` and write its CSVs plus ``<name>_manifest.json`` under ``cfg.output_dir``.

    CSVs depend only on the config, so a fixed seed reproduces them byte
    for byte; timings and versions go to the manifest.
    """
    started = datetime.now(timezone.utc).isoformat()
    runtimes: dict[str, float] = {}
    t0 = time.perf_counter()
    if cfg.kind is ExperimentKind.PURIFICATION:
        outputs = _run_purification_experiment(cfg, progress, runtimes)
    else:
        outputs = _run_lattice_experiment(cfg, progress, runtimes)
    runtimes["total"] = time.perf_counter() - t0

    manifest = {
        "name": cfg.name,
        "kind": cfg.kind.value,
        "seed": cfg.seed,
        "started": started,
        "versions": package_versions(),
        "runtimes_s": {k: round(v, 3) for k, v in runtimes.items()},
        "outputs": [str(p) for p in outputs],
        "config": cfg.to_dict(),
    }
    path = cfg.output_path / f"{cfg.name}_manifest.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    logger.info("experiment %s wrote %d files in %.1fs", cfg.name, len(outputs), runtimes["total"])
    return ExperimentResult(outputs, path, runtimes)

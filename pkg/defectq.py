#!/usr/bin/env python3
"""
Command-line entry point: lattices, circuits, schedules, simulation, purification and experiments.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from src.errors import DefectQError


def _lattice(args: argparse.Namespace) -> int:
    from src.lattice import apply_yield, generate_perfect, save_lattice, single_fault_lattice
    from src.utils import stream_seed

    out = Path(args.out)
    print(f"📦 Generating {args.count} lattice(s) at d={args.d}...")
    for i in range(args.count):
        if args.single_fault:
            lattice = single_fault_lattice(args.d, args.single_fault)
        else:
            seed = int(stream_seed(args.seed, args.d, i).generate_state(1)[0])
            lattice = apply_yield(generate_perfect(args.d), args.yield_, seed)
        path = save_lattice(lattice, out / f"lattice_d{args.d}_{i:03d}.json")
        print(f"   {path.name}: {len(lattice.faulty)} faulty")
    print(f"✅ Lattices saved to: {out}")
    return 0


def _circuit(args: argparse.Namespace) -> int:
    from src.circuits import compose_all, save_circuits
    from src.lattice import encodability_check, load_lattice, reconfigure

    layout = reconfigure(load_lattice(args.lattice), args.policy)
    enc = encodability_check(layout)
    print(f"🔧 {len(layout.stabilizers)} stabilizers, reduced distance {enc.reduced_distance}")
    circuits = compose_all(layout)
    path = save_circuits(layout, circuits, args.out)
    print(f"✅ {len(circuits)} circuits, deepest {max(c.depth for c in circuits)} steps")
    print(f"📁 Circuits saved to: {path}")
    return 0


def _schedule(args: argparse.Namespace) -> int:
    from src.circuits import load_circuits
    from src.schedule import mean_correction_cycle, save_whole_circuit, schedule

    layout, circuits = load_circuits(args.circuits)
    print("🔄 Scheduling...")
    w = schedule(circuits, max_steps=args.steps, layout=layout)
    print(f"✅ {len(w.instances)} instances over {w.horizon} steps")
    print(f"   Average error-correction cycle: {mean_correction_cycle(w):.3f} steps")
    if args.out:
        print(f"📁 Whole circuit saved to: {save_whole_circuit(w, args.out)}")
    return 0


def _simulate(args: argparse.Namespace) -> int:
    from src.harness import chip_from_whole, logical_rate
    from src.schedule import load_whole_circuit

    chip = chip_from_whole(load_whole_circuit(args.circuit))
    print(f"🚀 {args.trials} trials at p={args.p:g} ({args.preset} preset)...")
    r = logical_rate(
        chip,
        args.p,
        args.trials,
        seed=args.seed,
        idle=args.idle,
        progress=not args.no_progress,
        preset=args.preset,
    )
    print(f"✅ Logical X rate {r.x_rate:.3e} ± {r.x_stderr:.3e} over {r.cycles} cycles")
    print(f"   Per cycle: X {r.per_cycle_x:.3e}, Z {r.per_cycle_z:.3e}")
    return 0


def _decode_bench(args: argparse.Namespace) -> int:
    from src.circuits import compose_all
    from src.decoder import boundary_miscorrection, matching_agreement, single_error_sweep
    from src.lattice import generate_perfect, reconfigure
    from src.schedule import schedule

    layout = reconfigure(generate_perfect(args.distance))
    whole = schedule(compose_all(layout), layout=layout)
    results = [
        matching_agreement(args.instances, args.seed),
        boundary_miscorrection(),
        single_error_sweep(whole),
    ]
    for r in results:
        mark = "✅" if r.passed else "❌"
        print(f"{mark} {r.name}: {r.cases} cases, {len(r.failures)} failures")
        for f in r.failures[:5]:
            print(f"   {f}")
    return 0 if all(r.passed for r in results) else 1


def _purify(args: argparse.Namespace) -> int:
    from src.noise import ErrorModel
    from src.purification import CSV_HEADER, purification_table, write_csv

    print(f"🔄 {args.scheme} with {args.codeA}/{args.codeB}, rounds 0..{args.rounds}, p={args.p:g}...")
    table = purification_table(
        args.scheme,
        (args.codeA, args.codeB),
        args.rounds,
        m=ErrorModel.purification(args.p),
        source=args.source,
        trials=args.trials,
        seed=args.seed,
        progress=not args.no_progress,
    )
    print(",".join(CSV_HEADER))
    for r in table:
        print(",".join(r.csv_row()))
    if args.csv:
        print(f"📁 Table saved to: {write_csv(table, args.csv)}")
    return 0


def _resources(args: argparse.Namespace) -> int:
    from src.codes import resource_formulas

    report = resource_formulas(args.d).to_dict()
    if args.json:
        print(json.dumps(report, indent=2))
        return 0
    for section in ("qubits_per_logical", "steps", "distances", "redundant_logicals"):
        print(f"{section}:")
        for k, v in report[section].items():
            print(f"   {k}: {v}")
    for note in report["notes"]:
        print(f"⚠️  {note}")
    return 0


def _verify_algebra(args: argparse.Namespace) -> int:
    from src.codes import verify_all

    print("🔧 Running algebra traces...")
    for name in verify_all():
        print(f"✅ {name}")
    return 0


def _metrics(args: argparse.Namespace) -> int:
    from src.harness import chip_from_whole, compute_metrics, prepare_chip
    from src.lattice import load_lattice
    from src.schedule import load_whole_circuit

    if args.circuit:
        chip = chip_from_whole(load_whole_circuit(args.circuit))
    else:
        chip = prepare_chip(load_lattice(args.lattice), args.policy)
    row = compute_metrics(chip.layout, chip.whole).to_row()
    print(json.dumps(row, indent=2))
    return 0


def _correlate(args: argparse.Namespace) -> int:
    from src.harness import correlate, load_ensemble

    table = correlate(load_ensemble(args.metrics, args.rates), args.target, args.p)
    best = table.strongest()
    for col, r in table.average.items():
        print(f"   {col:<18} {r: .3f}")
    print(f"✅ Strongest average correlation: {best} ({table.average[best]:.3f})")
    return 0


def _run(args: argparse.Namespace) -> int:
    from src.harness import load_config, run_experiment

    cfg = load_config(args.config)
    if args.workers is not None:
        cfg.workers = args.workers
    if args.output_dir:
        cfg.output_dir = args.output_dir
    print(f"🚀 Running {cfg.kind.value} experiment {cfg.name!r}...")
    result = run_experiment(cfg, progress=not args.no_progress)
    for path in result.outputs:
        print(f"📁 {path}")
    print(f"✅ Done in {result.runtimes['total']:.1f}s; manifest: {result.manifest}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="defectq", description="Fault-tolerance workbench for defective lattices")
    parser.add_argument("--verbose", "-v", action="count", default=0, help="-v for INFO, -vv for DEBUG logging")
    parser.add_argument("--no-progress", action="store_true", help="Hide progress bars")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice", help="Generate lattices")
    lsub = p.add_subparsers(dest="action", required=True)
    g = lsub.add_parser("gen", help="Sample faulty lattices at a given yield")
    g.add_argument("--d", type=int, required=True, help="Code distance (odd, >= 3)")
    g.add_argument("--yield", dest="yield_", type=float, default=1.0, help="Device yield in (0, 1]")
    g.add_argument("--count", type=int, default=1, help="Number of lattices")
    g.add_argument("--seed", type=int, default=0, help="Master seed")
    g.add_argument("--single-fault", choices=["center", "west", "northwest"], default=None, help="One fixed fault")
    g.add_argument("--out", type=str, required=True, help="Output directory")
    g.set_defaults(func=_lattice)

    p = sub.add_parser("circuit", help="Build stabilizer circuits")
    csub = p.add_subparsers(dest="action", required=True)
    b = csub.add_parser("build", help="Reconfigure a lattice and compose its circuits")
    b.add_argument("--lattice", required=True, help="Lattice JSON")
    b.add_argument("--policy", default="superunit", choices=["superunit", "triangular_z", "triangular_x"])
    b.add_argument("--out", required=True, help="Circuit JSON to write")
    b.set_defaults(func=_circuit)

    p = sub.add_parser("schedule", help="Schedule circuits into a whole circuit")
    p.add_argument("--circuits", required=True, help="Circuit JSON from 'circuit build'")
    p.add_argument("--steps", type=int, default=None, help="Horizon in steps (default: room for d + 2 cycles)")
    p.add_argument("--out", default=None, help="Whole-circuit JSON to write")
    p.set_defaults(func=_schedule)

    p = sub.add_parser("simulate", help="Monte Carlo logical error rate of a whole circuit")
    p.add_argument("--circuit", required=True, help="Whole-circuit JSON from 'schedule'")
    p.add_argument("--p", type=float, required=True, help="Physical error rate")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--preset", choices=["lattice", "purification"], default="lattice")
    p.add_argument("--idle", action="store_true", help="Add memory errors on waiting qubits")
    p.set_defaults(func=_simulate)

    p = sub.add_parser("decode-bench", help="Decoder oracle suites")
    p.add_argument("--instances", type=int, default=200, help="Random matching instances")
    p.add_argument("--distance", type=int, default=5, help="Perfect lattice for the single-error sweep")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_decode_bench)

    p = sub.add_parser("purify", help="Bell-pair purification table")
    p.add_argument("--scheme", choices=["physical", "before", "after", "after-strict"], default="physical")
    p.add_argument("--codeA", choices=["physical", "steane", "surface3"], default="physical")
    p.add_argument("--codeB", choices=["physical", "steane", "surface3"], default="physical")
    p.add_argument("--p", type=float, default=1e-3, help="Physical error rate")
    p.add_argument("--rounds", type=int, default=4, help="Rows 0..rounds")
    p.add_argument("--trials", type=int, default=100_000, help="Delivered pairs per row")
    p.add_argument("--source", choices=["optical", "local"], default="optical")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", default=None, help="CSV to write")
    p.set_defaults(func=_purify)

    p = sub.add_parser("resources", help="Qubit and step formulas at a code distance")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_resources)

    p = sub.add_parser("verify-algebra", help="Run the deformation-code tableau traces")
    p.set_defaults(func=_verify_algebra)

    p = sub.add_parser("metrics", help="Chip-quality metrics of one lattice")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--lattice", help="Lattice JSON (scheduled with the default horizon)")
    source.add_argument("--circuit", help="Whole-circuit JSON")
    p.add_argument("--policy", default="superunit", choices=["superunit", "triangular_z", "triangular_x"])
    p.set_defaults(func=_metrics)

    p = sub.add_parser("correlate", help="Correlate chip metrics with logical rates")
    p.add_argument("--metrics", required=True, help="<name>_metrics.csv from 'run'")
    p.add_argument("--rates", required=True, help="<name>_rates.csv from 'run'")
    p.add_argument("--target", choices=["linear", "log"], default="linear")
    p.add_argument("--p", type=float, default=0.002, help="Reference physical error rate")
    p.set_defaults(func=_correlate)

    p = sub.add_parser("run", help="Run an experiment file")
    p.add_argument("config", help="Experiment YAML or JSON")
    p.add_argument("--workers", type=int, default=None, help="Cap the worker pool")
    p.add_argument("--output-dir", default=None, help="Override output_dir")
    p.set_defaults(func=_run)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return int(args.func(args))
    except DefectQError as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

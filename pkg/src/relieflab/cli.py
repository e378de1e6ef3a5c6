"""``relieflab`` command line: generate, weigh, experiment, plot.

Exit codes: 0 on success, 2 on usage errors, 1 on runtime failures. Failures
print a single ``relieflab: error: ...`` line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .data import read_dataset, write_dataset
from .errors import ReliefLabError
from .experiment import DesignConfig, RecordWriter, read_records, run_design, runs_per_problem, separability, write_manifest
from .generators import KINDS, GeneratorSpec, generate
from .metrics import ProgressiveSchedule
from .plotting import MODES, plot_records
from .relief import VARIANTS, ReliefConfig, run


class UsageError(Exception):
    pass


def _global_flags(parser: argparse.ArgumentParser, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=int, default=default, help="random seed (default 0)")
    parser.add_argument("--out", default=default, help="output file or directory")
    parser.add_argument(
        "--json", action="store_true", default=argparse.SUPPRESS if suppress else False,
        help="machine-readable output",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relieflab", description="Relief-family feature weighting laboratory")
    parser.add_argument("--version", action="version", version=f"relieflab {__version__}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic dataset (CSV + meta.json)")
    _global_flags(gen, suppress=True)
    gen.add_argument("--kind", required=True, choices=KINDS)
    gen.add_argument("--relevant", type=int, required=True)
    gen.add_argument("--irrelevant", type=int, default=0)
    gen.add_argument("--instances", type=int, default=100)
    gen.add_argument("--p", type=int, help="modulus (modulo-p only, default 3)")
    gen.add_argument("--classes", type=int, help="number of classes (rdg1-*/random-rbf, default 2)")
    gen.add_argument("--centers", type=int, help="centers per class (random-rbf only, default 3)")
    gen.add_argument("--name", help="file stem (default derived from the flags)")

    weigh = sub.add_parser("weigh", help="run one Relief variant on a dataset file")
    _global_flags(weigh, suppress=True)
    weigh.add_argument("dataset", help="CSV file (with optional .meta.json sidecar)")
    weigh.add_argument("--algo", choices=VARIANTS, default="relieff")
    weigh.add_argument("--k", type=int, default=10)
    weigh.add_argument("--m", type=int, help="sample count (default: all instances)")
    weigh.add_argument("--s", type=float, default=0.06, help="pdReliefF steepness")
    weigh.add_argument("--a", type=float, default=2.0, help="pdReliefF exponent")

    exp = sub.add_parser("experiment", help="run the blocking design")
    _global_flags(exp, suppress=True)
    exp.add_argument("--problems", default=",".join(KINDS), help="comma-separated problem kinds")
    exp.add_argument("--smoke", action="store_true", help="max-relevant 10, iterations 3")
    exp.add_argument("--max-relevant", type=int)
    exp.add_argument("--irr-multiplier", type=int, default=2)
    exp.add_argument("--iterations", type=int)
    exp.add_argument("--instances", type=int, default=100)
    exp.add_argument("--k", type=int, default=10)
    exp.add_argument("--s", type=float, default=0.06)
    exp.add_argument("--a", type=float, default=2.0)
    exp.add_argument("--p", type=int, default=3)
    exp.add_argument("--workers", type=int, default=1)

    plot = sub.add_parser("plot", help="render separability plots from a records file")
    _global_flags(plot, suppress=True)
    plot.add_argument("records")
    plot.add_argument("--mode", choices=MODES + ("both",), default="both")
    plot.add_argument("--problem", action="append", help="restrict to a problem (repeatable)")
    plot.add_argument("--width", type=int, default=640)
    plot.add_argument("--height", type=int, default=420)
    return parser


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_generate(args) -> int:
    if args.instances < 2:
        raise UsageError("--instances must be at least 2 (a dataset needs two classes)")
    if args.p is not None and args.kind != "modulo-p":
        raise UsageError("--p only applies to --kind modulo-p")
    if args.centers is not None and args.kind != "random-rbf":
        raise UsageError("--centers only applies to --kind random-rbf")
    if args.classes is not None and args.kind not in ("rdg1-continuous", "rdg1-categoric", "random-rbf"):
        raise UsageError("--classes only applies to rdg1-* and random-rbf")
    seed = args.seed if args.seed is not None else 0
    try:
        spec = GeneratorSpec(
            kind=args.kind,
            n_relevant=args.relevant,
            n_irrelevant=args.irrelevant,
            n_instances=args.instances,
            seed=seed,
            p=args.p if args.p is not None else 3,
            n_classes=args.classes if args.classes is not None else 2,
            centers_per_class=args.centers if args.centers is not None else 3,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    dataset = generate(spec)
    name = args.name or f"{spec.kind}-r{spec.n_relevant}-i{spec.n_irrelevant}-s{seed}"
    out_dir = Path(args.out) if args.out else Path(".")
    csv_path, meta_path = write_dataset(dataset, out_dir / f"{name}.csv")
    _emit(
        args,
        {"csv": str(csv_path), "meta": str(meta_path), "instances": dataset.n_instances,
         "features": dataset.n_features, "classes": dataset.n_classes},
        f"wrote {csv_path} ({dataset.n_instances} instances, {dataset.n_features} features) and {meta_path}",
    )
    return 0


def cmd_weigh(args) -> int:
    dataset = read_dataset(args.dataset)
    seed = args.seed if args.seed is not None else 0
    config = ReliefConfig(args.algo, m=args.m, k=args.k, seed=seed, schedule=ProgressiveSchedule(args.s, args.a))
    weights = run(dataset, config)
    relevant = dataset.relevant
    sep = separability(weights, relevant) if relevant.any() and not relevant.all() else None
    names = [f.name for f in dataset.features]
    payload = {
        "algorithm": args.algo,
        "k": args.k,
        "seed": seed,
        "weights": {n: float(w) for n, w in zip(names, weights)},
        "separability": sep,
    }
    lines = [f"{n}\t{w:+.9f}{'  *' if r else ''}" for n, w, r in zip(names, weights, relevant)]
    if sep is not None:
        lines.append(f"separability\t{sep:+.9f}")
    _emit(args, payload, "\n".join(lines))
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    return 0


def cmd_experiment(args) -> int:
    problems = tuple(p.strip() for p in args.problems.split(",") if p.strip())
    unknown = [p for p in problems if p not in KINDS]
    if unknown:
        raise UsageError(f"unknown problem(s) {unknown}; choose from {', '.join(KINDS)}")
    base = DesignConfig.smoke() if args.smoke else DesignConfig()
    config = DesignConfig(
        problems=problems,
        max_relevant=args.max_relevant or base.max_relevant,
        irr_multiplier=args.irr_multiplier,
        iterations=args.iterations or base.iterations,
        n_instances=args.instances,
        k=args.k,
        s=args.s,
        a=args.a,
        seed=args.seed if args.seed is not None else 0,
        p=args.p,
    )
    out_dir = Path(args.out) if args.out else Path("results")
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        records_path = out_dir / "records.csv"
        with RecordWriter(records_path) as writer:
            records = run_design(config, workers=args.workers, on_record=writer.write)
        manifest = write_manifest(config, out_dir / "manifest.json", n_records=len(records))
    except OSError as exc:
        raise ReliefLabError(f"cannot write to {out_dir}: {exc}") from exc
    _emit(
        args,
        {"records": str(records_path), "manifest": str(manifest), "count": len(records),
         "runs_per_problem": runs_per_problem(config)},
        f"wrote {len(records)} records to {records_path}",
    )
    return 0


def cmd_plot(args) -> int:
    records = read_records(args.records)
    modes = MODES if args.mode == "both" else (args.mode,)
    out_dir = Path(args.out) if args.out else Path(args.records).parent / "plots"
    written = []
    for mode in modes:
        written += plot_records(records, out_dir, mode, args.problem, args.width, args.height)
    _emit(args, {"files": [str(p) for p in written]}, "\n".join(str(p) for p in written))
    return 0


COMMANDS = {"generate": cmd_generate, "weigh": cmd_weigh, "experiment": cmd_experiment, "plot": cmd_plot}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"relieflab: error: {exc}", file=sys.stderr)
        return 2
    except (ReliefLabError, ValueError, OSError) as exc:
        print(f"relieflab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``python -m modefs <command> ...``.

Commands:
    run      one optimisation run, results written to ``--out``
    batch    repeated runs with consecutive seeds plus HV/IGD statistics
    oracle   exhaustive true front of the training split (small D only)
    metrics  HV and IGD of a stored front CSV
    stats    relevance weights and redundancy scores per feature
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from modefs.engine import RunConfig, StageError, export, prepare, run, run_batch
from modefs.evo_core import STRATEGIES
from modefs.metrics import ReferenceFront, exhaustive_pareto, hypervolume, igd, read_points_csv


def _label(text: str) -> str | int:
    try:
        return int(text)
    except ValueError:
        return text


def _grid_n(text: str) -> int | str:
    return "pop" if text == "pop" else int(text)


def _config_flags(p: argparse.ArgumentParser) -> None:
    d = RunConfig()
    p.add_argument("dataset", type=Path, help="CSV file with a header row")
    p.add_argument("--label-column", type=_label, default=d.label_column,
                   help="label column name or zero-based index (default: last)")
    p.add_argument("--pop-size", type=int, default=d.pop_size,
                   help="population size (default: min(D, 200))")
    p.add_argument("--generations", type=int, default=d.max_generations)
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--split-seed", type=int, default=d.split_seed)
    p.add_argument("--train-fraction", type=float, default=d.train_fraction)
    p.add_argument("--theta", type=float, default=d.theta)
    p.add_argument("--knn-k", type=int, default=d.k)
    p.add_argument("-F", "--scale-factor", type=float, default=d.F)
    p.add_argument("--grid-n", type=_grid_n, default=d.grid_n, help="grid resolution or 'pop'")
    p.add_argument("--rho", type=int, default=d.rho_threshold, help="dense-cell threshold")
    p.add_argument("--max-depth", type=int, default=d.max_depth)
    p.add_argument("--fcm-epochs", type=int, default=d.fcm_epochs)
    p.add_argument("--fcm-learning-rate", type=float, default=d.fcm_learning_rate)
    p.add_argument("--strategy", choices=STRATEGIES, default=d.mutation_strategy)
    p.add_argument("--redundancy", choices=("mean", "max"), default=d.redundancy_reduction)
    p.add_argument("--tau-with-diagonal", action="store_true")
    p.add_argument("--reject-worse-refinements", action="store_true")


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        pop_size=args.pop_size,
        max_generations=args.generations,
        theta=args.theta,
        k=args.knn_k,
        F=args.scale_factor,
        grid_n=args.grid_n,
        rho_threshold=args.rho,
        max_depth=args.max_depth,
        fcm_epochs=args.fcm_epochs,
        fcm_learning_rate=args.fcm_learning_rate,
        seed=args.seed,
        split_seed=args.split_seed,
        train_fraction=args.train_fraction,
        mutation_strategy=args.strategy,
        label_column=args.label_column,
        redundancy_reduction=args.redundancy,
        tau_include_diagonal=args.tau_with_diagonal,
        accept_worse_refinement=not args.reject_worse_refinements,
    )


def _cmd_run(args: argparse.Namespace) -> int:
    result = run(_config(args), args.dataset)
    export(result, args.out)
    print(f"front: {len(result.front)} members, HV {result.hv:.6f}, written to {args.out}")
    return 0


def _cmd_batch(args: argparse.Namespace) -> int:
    reference = ReferenceFront.from_csv(args.reference) if args.reference else None
    batch = run_batch(_config(args), args.dataset, args.runs, reference)
    out = Path(args.out)
    for r, result in enumerate(batch.runs):
        export(result, out / f"run_{r:03d}")
    batch.reference.to_csv(out / "reference.csv")
    with (out / "batch.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["run", "seed", "hv", "igd"])
        for r, (result, hv, ig) in enumerate(zip(batch.runs, batch.hv, batch.igd)):
            writer.writerow([r, result.config.seed, repr(float(hv)), repr(float(ig))])
    summary = batch.summary()
    (out / "batch_summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    for name, s in summary.items():
        print(f"{name.upper()}: {s['mean']:.3e} ± {s['std']:.3e} (median {s['median']:.3e})")
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    problem = prepare(_config(args), args.dataset)
    front = exhaustive_pareto(problem.train, args.knn_k, args.max_features)
    front.to_csv(args.out)
    print(f"{len(front)} nondominated points written to {args.out}")
    return 0


def _cmd_metrics(args: argparse.Namespace) -> int:
    points = read_points_csv(args.front)
    print(f"hv,{hypervolume(points, tuple(args.ref_point))!r}")
    if args.reference:
        print(f"igd,{igd(points, ReferenceFront.from_csv(args.reference))!r}")
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    problem = prepare(_config(args), args.dataset)
    stats, names = problem.stats, problem.train.feature_names
    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["feature", "name", "q", "a_index", "tau"])
        for j, name in enumerate(names):
            writer.writerow([j, name, repr(float(stats.q[j])), repr(float(stats.a_index[j])), repr(stats.tau)])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modefs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="single optimisation run")
    _config_flags(p)
    p.add_argument("--out", type=Path, default=Path("modefs_out"))
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("batch", help="repeated runs with summary statistics")
    _config_flags(p)
    p.add_argument("--runs", type=int, default=30)
    p.add_argument("--reference", type=Path, help="reference front CSV (fr,er) for IGD")
    p.add_argument("--out", type=Path, default=Path("modefs_batch"))
    p.set_defaults(func=_cmd_batch)

    p = sub.add_parser("oracle", help="exhaustive Pareto front of the training split")
    _config_flags(p)
    p.add_argument("--max-features", type=int, default=20)
    p.add_argument("--out", type=Path, default=Path("reference.csv"))
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("metrics", help="HV and IGD of a stored front")
    p.add_argument("front", type=Path, help="CSV with fr and er columns")
    p.add_argument("--reference", type=Path)
    p.add_argument("--ref-point", type=float, nargs=2, default=(1.0, 1.0))
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("stats", help="dump relevance weights and redundancy scores")
    _config_flags(p)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=_cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StageError as exc:
        print(f"modefs {args.command} failed at stage {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"modefs {args.command} failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""End-to-end optimisation run, batch statistics and result export.

A run loads and splits the data, learns the feature statistics on the
training split, builds the initial population, then alternates the
mutation-selection update and the grid refinement for ``max_generations``
generations. The output front is the rank-0 set of the final population.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from modefs.classify import Evaluator, holdout_error
from modefs.data import Dataset, load_csv, normalize_split, stratified_split
from modefs.evo_core import Front, Population, pareto_front
from modefs.foagm import RefinementEvent, foagm_step
from modefs.metrics import ReferenceFront, hypervolume, igd
from modefs.msbiu import ReplacementEvent, msbiu_step
from modefs.stats import FeatureStats, compute_feature_stats
from modefs.wrbi import initialize

MAX_POP_SIZE = 200


class StageError(RuntimeError):
    """A pipeline stage failed; the message starts with the stage name."""


@dataclass
class RunConfig:
    pop_size: int | None = None  # None -> min(D, 200), at least 4
    max_generations: int = 50
    theta: float = 0.6
    k: int = 5
    F: float = 0.5
    grid_n: int | str = 10  # "pop" -> population size
    rho_threshold: int = 3
    max_depth: int = 3
    fcm_epochs: int = 200
    fcm_learning_rate: float = 0.1
    seed: int = 0
    split_seed: int = 0
    train_fraction: float = 0.6
    mutation_strategy: str = "rand/1"
    ref_point: tuple[float, float] = (1.0, 1.0)
    label_column: str | int = -1
    redundancy_reduction: str = "mean"
    tau_include_diagonal: bool = False
    elite_fraction: float | None = 0.25
    accept_worse_refinement: bool = True

    def resolved_pop_size(self, n_features: int) -> int:
        if self.pop_size is not None:
            return self.pop_size
        return max(4, min(n_features, MAX_POP_SIZE))

    def to_dict(self) -> dict:
        out = asdict(self)
        out["ref_point"] = list(self.ref_point)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        data = dict(data)
        if "ref_point" in data:
            data["ref_point"] = tuple(data["ref_point"])
        return cls(**data)


def budget_generations(pop_size: int, iterations_per_individual: int = 100) -> int:
    """Generations implied by a budget of ``100 * P`` evaluations.

    Each generation spends one evaluation per slot, so the budget maps to
    ``iterations_per_individual`` generations regardless of ``pop_size``.
    """
    return (iterations_per_individual * pop_size) // pop_size


@dataclass
class Problem:
    """Normalised splits plus everything derived from the training side."""

    train: Dataset
    test: Dataset
    stats: FeatureStats
    evaluator: Evaluator


@dataclass
class RunResult:
    config: RunConfig
    front: Front
    test_er: np.ndarray
    hv_trace: list[float]
    replacements: list[ReplacementEvent] = field(default_factory=list)
    refinements: list[RefinementEvent] = field(default_factory=list)
    elapsed: float = 0.0
    n_evaluations: int = 0  # fitness requests, cache hits included
    population: Population | None = None

    @property
    def hv(self) -> float:
        return self.hv_trace[-1]


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(f"{name}: {exc}") from exc


def prepare(config: RunConfig, dataset: Dataset | str | Path) -> Problem:
    """Load, split (fixed ``split_seed``), normalise and compute statistics.

    Scaling is fitted on the training split only.
    """
    raw = (
        dataset
        if isinstance(dataset, Dataset)
        else _stage("load", load_csv, dataset, config.label_column)
    )
    train, test = _stage("split", stratified_split, raw, config.train_fraction, config.split_seed)
    train, test = normalize_split(train, test)
    stats = _stage(
        "stats",
        compute_feature_stats,
        train,
        config.fcm_epochs,
        config.fcm_learning_rate,
        config.seed,
        config.redundancy_reduction,
        config.tau_include_diagonal,
    )
    return Problem(train, test, stats, Evaluator(train, config.k))


def front_hv(pop: Population, ref_point: tuple[float, float]) -> float:
    return hypervolume(pareto_front(pop.individuals), ref_point)


def run_problem(config: RunConfig, problem: Problem) -> RunResult:
    """Run the optimiser on an already prepared problem."""
    start = time.perf_counter()
    evaluator, stats = problem.evaluator, problem.stats
    calls_before = evaluator.n_calls
    pop_size = config.resolved_pop_size(problem.train.n_features)
    pop = _stage(
        "init", initialize, pop_size, stats, config.seed, evaluator, config.theta, config.elite_fraction
    )
    hv_trace = [front_hv(pop, config.ref_point)]
    replacements: list[ReplacementEvent] = []
    refinements: list[RefinementEvent] = []
    for _ in range(config.max_generations):
        pop, rep = _stage(
            "msbiu", msbiu_step, pop, stats, config.seed, evaluator,
            config.F, config.theta, config.mutation_strategy,
        )
        pop, ref = _stage(
            "foagm", foagm_step, pop, stats, config.seed, evaluator,
            config.grid_n, config.rho_threshold, config.max_depth,
            config.theta, config.accept_worse_refinement,
        )
        replacements.extend(rep)
        refinements.extend(ref)
        hv_trace.append(front_hv(pop, config.ref_point))

    front = pareto_front(pop.individuals)
    test_er = np.array(
        [_stage("holdout", holdout_error, m, problem.train, problem.test, config.k) for m in front.masks]
    )
    return RunResult(
        config,
        front,
        test_er,
        hv_trace,
        replacements,
        refinements,
        time.perf_counter() - start,
        evaluator.n_calls - calls_before,
        pop,
    )


def run(config: RunConfig, dataset: Dataset | str | Path) -> RunResult:
    """Full optimisation run on a CSV path or a raw :class:`Dataset`."""
    return run_problem(config, prepare(config, dataset))


def _mean_std_median(values: np.ndarray) -> dict[str, float]:
    values = np.asarray(values, dtype=float)
    std = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return {"mean": float(values.mean()), "std": std, "median": float(np.median(values))}


@dataclass
class BatchResult:
    runs: list[RunResult]
    hv: np.ndarray
    igd: np.ndarray
    reference: ReferenceFront

    def summary(self) -> dict[str, dict[str, float]]:
        return {"hv": _mean_std_median(self.hv), "igd": _mean_std_median(self.igd)}


def run_batch(
    config: RunConfig,
    dataset: Dataset | str | Path,
    n_runs: int = 30,
    reference: ReferenceFront | None = None,
) -> BatchResult:
    """Independent runs with seeds ``config.seed + r`` on one fixed split.

    Without a supplied ``reference`` the IGD reference is the nondominated
    union of all runs' fronts.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be positive")
    problem = prepare(config, dataset)
    runs = []
    for r in range(n_runs):
        cfg = RunConfig.from_dict({**config.to_dict(), "seed": config.seed + r})
        runs.append(run_problem(cfg, problem))
    if reference is None:
        reference = ReferenceFront.from_points(np.vstack([r.front.objectives for r in runs]))
    hv = np.array([r.hv for r in runs])
    igds = np.array([igd(r.front, reference) for r in runs])
    return BatchResult(runs, hv, igds, reference)


def _fmt(x: float) -> str:
    return repr(float(x))


def export(result: RunResult, out_dir: str | Path) -> list[Path]:
    """Write the run's front, HV trace, logs, config and an SVG scatter.

    ``front.csv`` and ``hv_trace.csv`` depend only on the dataset and the
    configuration; timing goes to ``summary.json``.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def _csv(name: str, header: list[str], rows) -> None:
        path = out / name
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        written.append(path)

    front = result.front
    _csv(
        "front.csv",
        ["mask", "fr", "train_er", "test_er"],
        (
            [_bits(m), _fmt(fr), _fmt(er), _fmt(te)]
            for m, (fr, er), te in zip(front.masks, front.objectives, result.test_er)
        ),
    )
    _csv("hv_trace.csv", ["generation", "hv"], ([g, _fmt(h)] for g, h in enumerate(result.hv_trace)))
    _csv(
        "replacements.csv",
        ["generation", "slot", "old_mask", "new_mask", "old_fr", "old_er", "new_fr", "new_er", "replaced"],
        (
            [e.generation, e.slot, _bits(e.old_mask), _bits(e.new_mask),
             *map(_fmt, e.old_objectives), *map(_fmt, e.new_objectives), int(e.replaced)]
            for e in result.replacements
        ),
    )
    _csv(
        "refinements.csv",
        ["generation", "slot", "removed", "added", "old_fr", "old_er", "new_fr", "new_er", "accepted"],
        (
            [e.generation, e.slot, "" if e.removed is None else e.removed,
             "" if e.added is None else e.added,
             *map(_fmt, e.old_objectives), *map(_fmt, e.new_objectives), int(e.accepted)]
            for e in result.refinements
        ),
    )

    path = out / "config.json"
    path.write_text(json.dumps(result.config.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    written.append(path)
    path = out / "summary.json"
    summary = {
        "elapsed_seconds": result.elapsed,
        "n_evaluations": result.n_evaluations,
        "front_size": len(front),
        "final_hv": result.hv,
    }
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    written.append(path)
    path = out / "front.svg"
    path.write_text(front_svg(front.objectives), encoding="utf-8")
    written.append(path)
    return written


def _bits(mask: np.ndarray) -> str:
    return "".join("1" if b else "0" for b in mask)


def front_svg(points: np.ndarray, size: int = 400, margin: int = 50) -> str:
    """Scatter of (fr, er) points on the unit square: fr across, er up."""
    span = size - 2 * margin
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="{margin}" y="{margin}" width="{span}" height="{span}" fill="none" stroke="black"/>',
        f'<text x="{size / 2}" y="{size - 12}" text-anchor="middle" font-size="14">'
        f"{escape('feature ratio')}</text>",
        f'<text x="14" y="{size / 2}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 14 {size / 2})">{escape("error rate")}</text>',
    ]
    for tick in (0.0, 0.5, 1.0):
        lines.append(
            f'<text x="{margin + tick * span}" y="{size - margin + 16}" text-anchor="middle" '
            f'font-size="11">{tick:g}</text>'
        )
        lines.append(
            f'<text x="{margin - 6}" y="{size - margin - tick * span + 4}" text-anchor="end" '
            f'font-size="11">{tick:g}</text>'
        )
    for fr, er in np.asarray(points, dtype=float).reshape(-1, 2):
        cx = margin + fr * span
        cy = size - margin - er * span
        lines.append(f'<circle class="member" cx="{cx:.3f}" cy="{cy:.3f}" r="4" fill="steelblue"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"

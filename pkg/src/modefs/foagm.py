"""Adaptive objective-space grid with refinement of crowded individuals.

The population's (fr, er) points are binned on an ``n x n`` grid spanning
their current bounds. Cells holding more than ``rho_threshold`` points are
split 2x2 recursively until no subcell is crowded or ``max_depth`` is hit.
Inside every leaf that is still crowded, dominated members are refined: the
least relevant selected feature is swapped for the unselected feature with
the best relevance-to-redundancy ratio. If nobody in the leaf is dominated,
the ``rho_threshold`` lowest-error members are kept and the rest refined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from modefs.classify import ObjectivePair
from modefs.evo_core import THETA, Individual, Population, dominates, nondominated_ranks
from modefs.stats import FeatureStats

STAGE_FOAGM = 2
RATIO_EPS = 1e-6

Rect = tuple[float, float, float, float]  # (min f1, max f1, min f2, max f2)


@dataclass
class Grid:
    n: int
    bounds: Rect
    cells: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    depth: int = 0


@dataclass(frozen=True)
class Leaf:
    bounds: Rect
    depth: int
    members: tuple[int, ...]


@dataclass(frozen=True)
class RefinementEvent:
    generation: int
    slot: int
    removed: int | None
    added: int | None
    old_mask: np.ndarray
    new_mask: np.ndarray
    old_objectives: ObjectivePair
    new_objectives: ObjectivePair
    accepted: bool


def _bin(value: float, lo: float, hi: float, n: int) -> int:
    width = (hi - lo) / n
    if width <= 0.0:
        return 0
    return min(max(int((value - lo) // width), 0), n - 1)


def grid_assign(objectives: ObjectivePair, grid: Grid) -> tuple[int, int]:
    """Cell of a point; the upper bound of each axis folds into the last cell."""
    x0, x1, y0, y1 = grid.bounds
    return _bin(objectives[0], x0, x1, grid.n), _bin(objectives[1], y0, y1, grid.n)


def build_grid(points: np.ndarray, n: int) -> Grid:
    """Bin every row of an (m, 2) objective array."""
    pts = np.asarray(points, dtype=float)
    if n < 1:
        raise ValueError(f"grid resolution must be positive, got {n}")
    bounds = (pts[:, 0].min(), pts[:, 0].max(), pts[:, 1].min(), pts[:, 1].max())
    grid = Grid(n, tuple(float(b) for b in bounds))
    for idx, p in enumerate(pts):
        grid.cells.setdefault(grid_assign(p, grid), []).append(idx)
    return grid


def cell_bounds(grid: Grid, cell: tuple[int, int]) -> Rect:
    x0, x1, y0, y1 = grid.bounds
    dx, dy = (x1 - x0) / grid.n, (y1 - y0) / grid.n
    return (x0 + cell[0] * dx, x0 + (cell[0] + 1) * dx, y0 + cell[1] * dy, y0 + (cell[1] + 1) * dy)


def find_dense_cells(grid: Grid, rho_threshold: int) -> list[tuple[int, int]]:
    return sorted(c for c, members in grid.cells.items() if len(members) > rho_threshold)


def subdivide(
    points: np.ndarray,
    members: list[int] | tuple[int, ...],
    bounds: Rect,
    rho_threshold: int,
    max_depth: int,
    depth: int = 0,
) -> list[Leaf]:
    """Split a crowded cell 2x2 and recurse into crowded subcells.

    Returns every leaf (crowded or not) covering ``members``; recursion stops
    at ``max_depth`` levels below the starting cell.
    """
    pts = np.asarray(points, dtype=float)
    x0, x1, y0, y1 = bounds
    xm, ym = (x0 + x1) / 2.0, (y0 + y1) / 2.0
    quads: dict[tuple[int, int], list[int]] = {}
    for idx in members:
        key = (_bin(pts[idx, 0], x0, x1, 2), _bin(pts[idx, 1], y0, y1, 2))
        quads.setdefault(key, []).append(idx)
    leaves: list[Leaf] = []
    for (cx, cy), sub in sorted(quads.items()):
        rect = (
            x0 if cx == 0 else xm,
            xm if cx == 0 else x1,
            y0 if cy == 0 else ym,
            ym if cy == 0 else y1,
        )
        if len(sub) > rho_threshold and depth + 1 < max_depth:
            leaves.extend(subdivide(pts, sub, rect, rho_threshold, max_depth, depth + 1))
        else:
            leaves.append(Leaf(rect, depth + 1, tuple(sub)))
    return leaves


def dense_leaves(points: np.ndarray, grid_n: int, rho_threshold: int, max_depth: int) -> list[Leaf]:
    """Leaves that are still crowded after adaptive subdivision."""
    grid = build_grid(points, grid_n)
    out: list[Leaf] = []
    for cell in find_dense_cells(grid, rho_threshold):
        for leaf in subdivide(points, grid.cells[cell], cell_bounds(grid, cell), rho_threshold, max_depth):
            if len(leaf.members) > rho_threshold:
                out.append(leaf)
    return out


def swap_features(mask: np.ndarray, stats: FeatureStats) -> tuple[np.ndarray, int | None, int | None]:
    """Drop the lowest-weight selected feature, add the best unselected one.

    The added feature maximises ``q / max(a_index, eps)``. Ties resolve to the
    lowest index. A full mask is returned unchanged.
    """
    mask = np.asarray(mask, dtype=bool)
    selected = np.flatnonzero(mask)
    free = np.flatnonzero(~mask)
    if free.size == 0 or selected.size == 0:
        return mask.copy(), None, None
    removed = int(selected[np.argmin(stats.q[selected])])
    ratio = stats.q[free] / np.maximum(stats.a_index[free], RATIO_EPS)
    added = int(free[np.argmax(ratio)])
    out = mask.copy()
    out[removed] = False
    out[added] = True
    return out, removed, added


def refine_individual(
    ind: Individual,
    stats: FeatureStats,
    rng: np.random.Generator,
    evaluator: Callable[[np.ndarray], ObjectivePair],
    theta: float = THETA,
) -> tuple[Individual, int | None, int | None]:
    """Swap one feature of ``ind`` and re-evaluate; full masks pass through."""
    mask, removed, added = swap_features(ind.mask, stats)
    if removed is None:
        return ind, None, None
    return Individual.from_mask(mask, rng, evaluator, theta), removed, added


def _to_refine(objs: np.ndarray, members: tuple[int, ...], rho_threshold: int) -> list[int]:
    ranks = nondominated_ranks(objs[list(members)])
    if ranks.max() > 0:
        return [m for m, r in zip(members, ranks) if r > 0]
    by_error = sorted(members, key=lambda m: (objs[m, 1], objs[m, 0], m))
    return by_error[rho_threshold:]


def foagm_step(
    pop: Population,
    stats: FeatureStats,
    seed: int,
    evaluator: Callable[[np.ndarray], ObjectivePair],
    grid_n: int | str = 10,
    rho_threshold: int = 3,
    max_depth: int = 3,
    theta: float = THETA,
    accept_worse: bool = True,
) -> tuple[Population, list[RefinementEvent]]:
    """Refine the inferior members of crowded grid leaves in place.

    ``grid_n="pop"`` uses the population size as the grid resolution. With
    ``accept_worse=False`` a refined individual is only kept when the
    original does not dominate it.
    """
    n = len(pop) if grid_n == "pop" else int(grid_n)
    objs = pop.objectives()
    leaves = dense_leaves(objs, n, rho_threshold, max_depth)
    if not leaves:
        return pop, []
    individuals = list(pop.individuals)
    events: list[RefinementEvent] = []
    for slot in sorted(s for leaf in leaves for s in _to_refine(objs, leaf.members, rho_threshold)):
        old = individuals[slot]
        rng = np.random.default_rng([seed, STAGE_FOAGM, pop.generation, slot])
        new, removed, added = refine_individual(old, stats, rng, evaluator, theta)
        accepted = accept_worse or not dominates(old.objectives, new.objectives)
        if accepted:
            individuals[slot] = new
        events.append(
            RefinementEvent(
                pop.generation, slot, removed, added,
                old.mask, new.mask, old.objectives, new.objectives, accepted,
            )
        )
    return Population(individuals, pop.generation), events

"""Individuals, Pareto dominance and the classical DE operators.

Positions are real vectors in [0, 1]^D; a feature is selected when its
position component reaches the threshold ``theta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from modefs.classify import ObjectivePair

THETA = 0.6

STRATEGIES = ("rand/1", "rand/2", "best/1", "best/2", "current-to-best/1")
_N_DONORS = {"rand/1": 3, "rand/2": 5, "best/1": 2, "best/2": 4, "current-to-best/1": 2}


@dataclass
class Individual:
    position: np.ndarray
    mask: np.ndarray
    objectives: ObjectivePair | None = None

    @property
    def evaluated(self) -> bool:
        return self.objectives is not None

    @classmethod
    def from_mask(
        cls,
        mask: np.ndarray,
        rng: np.random.Generator,
        evaluator: Callable[[np.ndarray], ObjectivePair] | None = None,
        theta: float = THETA,
    ) -> Individual:
        mask = np.asarray(mask, dtype=bool)
        ind = cls(encode(mask, rng, theta), mask.copy())
        if evaluator is not None:
            ind.objectives = evaluator(ind.mask)
        return ind


@dataclass
class Population:
    individuals: list[Individual]
    generation: int = 0

    def __len__(self) -> int:
        return len(self.individuals)

    def __iter__(self) -> Iterator[Individual]:
        return iter(self.individuals)

    def __getitem__(self, i: int) -> Individual:
        return self.individuals[i]

    def positions(self) -> np.ndarray:
        return np.array([ind.position for ind in self.individuals])

    def masks(self) -> np.ndarray:
        return np.array([ind.mask for ind in self.individuals])

    def objectives(self) -> np.ndarray:
        """(P, 2) array of (fr, er); raises if anyone is unevaluated."""
        _require_evaluated(self.individuals)
        return np.array([ind.objectives for ind in self.individuals], dtype=float)


@dataclass
class Front:
    """Mutually nondominated (mask, objectives) pairs without exact duplicates."""

    masks: np.ndarray
    objectives: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))

    def __len__(self) -> int:
        return self.objectives.shape[0]


def _require_evaluated(individuals: Iterable[Individual]) -> None:
    if any(ind.objectives is None for ind in individuals):
        raise ValueError("population contains an unevaluated individual")


def decode(position: np.ndarray, theta: float = THETA) -> np.ndarray:
    return np.asarray(position) >= theta


def encode(mask: np.ndarray, rng: np.random.Generator, theta: float = THETA) -> np.ndarray:
    """Random position that decodes back to ``mask``.

    Selected components are drawn from [theta, 1], the rest from [0, theta).
    """
    mask = np.asarray(mask, dtype=bool)
    u = rng.random(mask.shape[0])
    pos = np.where(mask, theta + u * (1.0 - theta), u * theta)
    # guard the open upper end of the unselected interval against rounding
    return np.where(~mask & (pos >= theta), np.nextafter(theta, 0.0), pos)


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True if ``a`` Pareto-dominates ``b`` under minimisation."""
    return a[0] <= b[0] and a[1] <= b[1] and (a[0] < b[0] or a[1] < b[1])


def nondominated_ranks(points: np.ndarray) -> np.ndarray:
    """Pareto rank of every row of an (n, 2) objective array (0 = best)."""
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    le = (pts[:, None, :] <= pts[None, :, :]).all(axis=2)
    lt = (pts[:, None, :] < pts[None, :, :]).any(axis=2)
    dom = le & lt  # dom[i, j]: i dominates j
    dominated_by = dom.sum(axis=0)
    ranks = np.full(n, -1, dtype=np.int64)
    current = np.flatnonzero(dominated_by == 0)
    rank = 0
    while current.size:
        ranks[current] = rank
        dominated_by = dominated_by - dom[current].sum(axis=0)
        dominated_by[ranks >= 0] = -1
        current = np.flatnonzero(dominated_by == 0)
        rank += 1
    return ranks


def nondominated_sort(population: Population | Sequence[Individual]) -> list[list[int]]:
    """Indices of the population grouped into Pareto fronts, best first."""
    individuals = list(population)
    _require_evaluated(individuals)
    if not individuals:
        return []
    ranks = nondominated_ranks(np.array([ind.objectives for ind in individuals], dtype=float))
    return [np.flatnonzero(ranks == r).tolist() for r in range(ranks.max() + 1)]


def best_index(population: Population | Sequence[Individual]) -> int:
    """Rank-0 member with the lowest error (then lowest ratio, then index)."""
    individuals = list(population)
    first = nondominated_sort(individuals)[0]
    return min(first, key=lambda i: (individuals[i].objectives.er, individuals[i].objectives.fr, i))


def pareto_front(individuals: Sequence[Individual]) -> Front:
    """Rank-0 members with exact (mask, objectives) duplicates removed.

    Members are ordered by (fr, er, mask bits).
    """
    individuals = list(individuals)
    if not individuals:
        return Front(np.zeros((0, 0), dtype=bool))
    first = nondominated_sort(individuals)[0]
    seen: dict[tuple, int] = {}
    for i in first:
        ind = individuals[i]
        seen.setdefault((tuple(ind.objectives), ind.mask.tobytes()), i)
    keep = sorted(
        seen.values(),
        key=lambda i: (*individuals[i].objectives, tuple(~individuals[i].mask)),
    )
    return Front(
        np.array([individuals[i].mask for i in keep]),
        np.array([individuals[i].objectives for i in keep], dtype=float),
    )


def mutate(
    strategy: str,
    population: Population | Sequence[Individual],
    i: int,
    F: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Mutant vector for slot ``i`` using one of the five DE strategies.

    Donors are distinct and never ``i``. The result is clipped to [0, 1].
    """
    if strategy not in _N_DONORS:
        raise ValueError(f"unknown mutation strategy {strategy!r}; choose from {STRATEGIES}")
    individuals = list(population)
    need = _N_DONORS[strategy]
    if len(individuals) < need + 1:
        raise ValueError(
            f"{strategy} needs {need} donors besides the target; population has {len(individuals)}"
        )
    others = np.array([j for j in range(len(individuals)) if j != i])
    r = rng.choice(others, size=need, replace=False)
    donors = [individuals[j].position for j in r]
    best = None if strategy.startswith("rand") else individuals[best_index(individuals)].position
    return mutant_vector(strategy, donors, F, best=best, current=individuals[i].position)


def mutant_vector(
    strategy: str,
    donors: Sequence[np.ndarray],
    F: float,
    best: np.ndarray | None = None,
    current: np.ndarray | None = None,
) -> np.ndarray:
    """Apply a DE mutation formula to already chosen donors, then clip."""
    x = [np.asarray(d, dtype=float) for d in donors]
    if len(x) != _N_DONORS[strategy]:
        raise ValueError(f"{strategy} takes {_N_DONORS[strategy]} donors, got {len(x)}")
    if strategy == "rand/1":
        v = x[0] + F * (x[1] - x[2])
    elif strategy == "rand/2":
        v = x[0] + F * (x[1] - x[2]) + F * (x[3] - x[4])
    elif strategy == "best/1":
        v = best + F * (x[0] - x[1])
    elif strategy == "best/2":
        v = best + F * (x[0] - x[1]) + F * (x[2] - x[3])
    else:
        v = current + F * (best - current) + F * (x[0] - x[1])
    return np.clip(v, 0.0, 1.0)


def crossover(x: np.ndarray, v: np.ndarray, cr: float, rng: np.random.Generator) -> np.ndarray:
    """Binomial crossover; component ``j_rand`` always comes from ``v``."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if x.shape != v.shape:
        raise ValueError("crossover operands differ in length")
    take = rng.random(x.shape[0]) < cr
    take[rng.integers(x.shape[0])] = True
    return np.where(take, v, x)


def classic_select(
    x: Individual, u: Individual, scalar_fitness: Callable[[Individual], float]
) -> Individual:
    """Greedy one-to-one survivor selection; the trial wins ties."""
    return u if scalar_fitness(u) <= scalar_fitness(x) else x

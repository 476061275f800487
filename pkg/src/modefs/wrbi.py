"""Initial population built from relevance and redundancy pools.

The population is split into four equal groups plus a top-up:

* P1: random subsets of the high-relevance pool.
* P2: random subsets of the low-relevance pool (redundancy ignored).
* P3: subsets of the high pool with redundant features stripped.
* P4: small "elite" subsets of the high pool (cardinality biased low).

Any remainder is filled from the high pool.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from modefs.classify import ObjectivePair
from modefs.evo_core import THETA, Individual, Population
from modefs.stats import FeatureStats

HIGH_FRACTION = 0.6

# seed-stream stage id; the engine uses 1 and 2 for the generation stages
STAGE_INIT = 0


@dataclass(frozen=True)
class WeightPools:
    high_weight: np.ndarray
    low_weight: np.ndarray


def split_weight_pools(q: np.ndarray, high_fraction: float = HIGH_FRACTION) -> WeightPools:
    """Top ``ceil(0.6 D)`` features by weight versus the rest.

    Ties in ``q`` go to the lower feature index first.
    """
    q = np.asarray(q, dtype=float)
    order = np.argsort(-q, kind="stable")
    n_high = math.ceil(high_fraction * q.shape[0])
    return WeightPools(np.sort(order[:n_high]), np.sort(order[n_high:]))


def sample_individual(
    pool: np.ndarray,
    n_features: int,
    q: np.ndarray,
    rng: np.random.Generator,
    redundancy_filter: tuple[np.ndarray, float] | None = None,
    max_cardinality: int | None = None,
    theta: float = THETA,
) -> Individual:
    """Random nonempty feature subset drawn from ``pool``.

    The subset size is uniform on ``[1, max_cardinality]`` (default: the pool
    size) and members are drawn without replacement. With a
    ``(a_index, tau)`` filter, features whose redundancy exceeds ``tau`` are
    dropped afterwards; an emptied subset is repaired with the pool's
    highest-weight feature.
    """
    pool = np.asarray(pool, dtype=np.int64)
    if pool.size == 0:
        raise ValueError("cannot sample from an empty feature pool")
    upper = pool.size if max_cardinality is None else min(max_cardinality, pool.size)
    size = int(rng.integers(1, upper + 1))
    chosen = rng.choice(pool, size=size, replace=False)
    if redundancy_filter is not None:
        a_index, tau = redundancy_filter
        chosen = chosen[np.asarray(a_index)[chosen] <= tau]
    if chosen.size == 0:
        chosen = pool[[int(np.argmax(np.asarray(q)[pool]))]]
    mask = np.zeros(n_features, dtype=bool)
    mask[chosen] = True
    return Individual.from_mask(mask, rng, theta=theta)


def subpopulation_sizes(pop_size: int) -> tuple[int, int, int, int, int]:
    """Sizes of P1..P4 and the high-pool top-up."""
    quarter = pop_size // 4
    return quarter, quarter, quarter, quarter, pop_size - 4 * quarter


def initialize(
    pop_size: int,
    stats: FeatureStats,
    seed: int,
    evaluator: Callable[[np.ndarray], ObjectivePair],
    theta: float = THETA,
    elite_fraction: float | None = 0.25,
) -> Population:
    """Build and evaluate the four-group initial population.

    Each slot draws from its own generator seeded by ``(seed, 0, 0, slot)``,
    so individuals are independent of evaluation order. ``elite_fraction``
    caps P4's subset size at ``ceil(fraction * |high pool|)``; ``None``
    makes P4 identical in law to P1.
    """
    if pop_size < 4:
        raise ValueError(f"population size must be at least 4, got {pop_size}")
    d = stats.n_features
    pools = split_weight_pools(stats.q)
    # with D = 2 the low pool is empty; P2 falls back to the high pool
    low = pools.low_weight if pools.low_weight.size else pools.high_weight
    elite_cap = None if elite_fraction is None else math.ceil(elite_fraction * pools.high_weight.size)
    filt = (stats.a_index, stats.tau)

    plan: list[tuple[np.ndarray, tuple | None, int | None]] = []
    n1, n2, n3, n4, extra = subpopulation_sizes(pop_size)
    plan += [(pools.high_weight, None, None)] * n1
    plan += [(low, None, None)] * n2
    plan += [(pools.high_weight, filt, None)] * n3
    plan += [(pools.high_weight, None, elite_cap)] * n4
    plan += [(pools.high_weight, None, None)] * extra

    individuals = []
    for slot, (pool, rfilter, cap) in enumerate(plan):
        rng = np.random.default_rng([seed, STAGE_INIT, 0, slot])
        ind = sample_individual(pool, d, stats.q, rng, rfilter, cap, theta)
        ind.objectives = evaluator(ind.mask)
        individuals.append(ind)
    return Population(individuals, generation=0)


def random_initialize(
    pop_size: int,
    n_features: int,
    seed: int,
    evaluator: Callable[[np.ndarray], ObjectivePair],
    theta: float = THETA,
) -> Population:
    """Plain uniform initialisation over [0, 1]^D, for comparison with the pool-based initialiser."""
    individuals = []
    for slot in range(pop_size):
        rng = np.random.default_rng([seed, STAGE_INIT, 1, slot])
        pos = rng.random(n_features)
        mask = pos >= theta
        individuals.append(Individual(pos, mask, evaluator(mask)))
    return Population(individuals, generation=0)

"""Mutation-selection update of the whole population for one generation.

For every slot a DE/rand/1 mutant is scaled component-wise by the
mean-centred relevance weights. A feature enters the candidate only when the
scaled mutant is positive there and the feature's redundancy score is below
the threshold. The candidate replaces the incumbent when it dominates it, or
when neither dominates and it has a strictly lower error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from modefs.classify import ObjectivePair
from modefs.evo_core import THETA, Individual, Population, dominates, mutate
from modefs.stats import FeatureStats

STAGE_MSBIU = 1


@dataclass(frozen=True)
class ReplacementEvent:
    generation: int
    slot: int
    old_mask: np.ndarray
    new_mask: np.ndarray
    old_objectives: ObjectivePair
    new_objectives: ObjectivePair
    replaced: bool
    repaired: bool


def mean_shift(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return q - q.mean()


def gate_mask(
    v: np.ndarray, q1: np.ndarray, a_index: np.ndarray, tau: float, q: np.ndarray
) -> tuple[np.ndarray, bool]:
    """Apply the weight and redundancy gates to a mutant vector.

    Returns the mask and whether the empty-mask repair (argmax-``q``
    feature) was needed.
    """
    scaled = np.asarray(v) * q1
    mask = (np.asarray(a_index) < tau) & (scaled > 0)
    if mask.any():
        return mask, False
    mask[int(np.argmax(q))] = True
    return mask, True


def accepts(candidate: ObjectivePair, incumbent: ObjectivePair) -> bool:
    """Replacement rule: dominate, or tie on dominance and win on error."""
    if dominates(candidate, incumbent):
        return True
    if dominates(incumbent, candidate):
        return False
    return candidate.er < incumbent.er


def msbiu_step(
    pop: Population,
    stats: FeatureStats,
    seed: int,
    evaluator: Callable[[np.ndarray], ObjectivePair],
    F: float = 0.5,
    theta: float = THETA,
    strategy: str = "rand/1",
) -> tuple[Population, list[ReplacementEvent]]:
    """One synchronous generation: every candidate is built from the
    generation-start population, and replacements are applied together.
    """
    if len(pop) < 4:
        raise ValueError(f"population of {len(pop)} is too small; need at least 4")
    if any(not ind.evaluated for ind in pop):
        raise ValueError("population contains an unevaluated individual")
    generation = pop.generation + 1
    q1 = mean_shift(stats.q)
    survivors: list[Individual] = []
    events: list[ReplacementEvent] = []
    for i, incumbent in enumerate(pop):
        rng = np.random.default_rng([seed, STAGE_MSBIU, generation, i])
        v = mutate(strategy, pop, i, F, rng)
        mask, repaired = gate_mask(v, q1, stats.a_index, stats.tau, stats.q)
        candidate = Individual.from_mask(mask, rng, evaluator, theta)
        replaced = accepts(candidate.objectives, incumbent.objectives)
        survivors.append(candidate if replaced else incumbent)
        events.append(
            ReplacementEvent(
                generation,
                i,
                incumbent.mask,
                candidate.mask,
                incumbent.objectives,
                candidate.objectives,
                replaced,
                repaired,
            )
        )
    return Population(survivors, generation), events

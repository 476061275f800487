"""Feature relevance weights and pairwise redundancy.

Relevance comes from a single-layer fuzzy cognitive map in which every
feature node feeds one label node through a logistic squashing function; the
learned edge magnitudes rank features by how strongly they drive the label.
Redundancy is the cosine similarity between feature columns, summarised per
feature and thresholded at the median pairwise similarity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from modefs.data import Dataset


@dataclass(frozen=True)
class FeatureStats:
    """Per-feature statistics consumed by the evolutionary stages.

    Attributes:
        q: Relevance weight of each feature, rescaled to [0, 1].
        a_matrix: Symmetric cosine-similarity matrix between columns.
        a_index: Scalar redundancy score per feature (row reduction of
            ``a_matrix`` without the diagonal).
        tau: Redundancy threshold (median pairwise similarity).
    """

    q: np.ndarray
    a_matrix: np.ndarray
    a_index: np.ndarray
    tau: float

    @property
    def n_features(self) -> int:
        return self.q.shape[0]


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine of the angle between ``u`` and ``v``; 0 when either is zero."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 1 or u.size == 0:
        raise ValueError(f"vectors must be 1-D with equal nonzero length, got {u.shape} and {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.clip(u @ v / (nu * nv), -1.0, 1.0))


def redundancy_stats(
    train: Dataset, reduction: str = "mean", include_diagonal: bool = False
) -> tuple[np.ndarray, np.ndarray, float]:
    """Cosine-similarity matrix, per-feature redundancy index and threshold.

    Args:
        train: Normalised training data.
        reduction: ``"mean"`` or ``"max"`` of each row's off-diagonal entries.
        include_diagonal: Take the median over the full upper triangle
            including the unit diagonal instead of off-diagonal entries only.

    Returns:
        ``(a_matrix, a_index, tau)``.
    """
    x = train.features
    d = x.shape[1]
    norms = np.linalg.norm(x, axis=0)
    safe = np.where(norms > 0, norms, 1.0)
    unit = x / safe
    a = np.clip(unit.T @ unit, -1.0, 1.0)
    zero = norms == 0
    a[zero, :] = 0.0
    a[:, zero] = 0.0
    a = (a + a.T) / 2.0
    np.fill_diagonal(a, 1.0)

    if d == 1:
        return a, np.zeros(1), 1.0 if include_diagonal else 0.0
    off = ~np.eye(d, dtype=bool)
    rows = np.where(off, a, np.nan)
    if reduction == "mean":
        a_index = np.nanmean(rows, axis=1)
    elif reduction == "max":
        a_index = np.nanmax(rows, axis=1)
    else:
        raise ValueError(f"unknown redundancy reduction {reduction!r}")
    iu = np.triu_indices(d, k=0 if include_diagonal else 1)
    tau = float(np.median(a[iu]))
    return a, a_index, tau


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def fcm_learn(
    train: Dataset,
    epochs: int = 200,
    learning_rate: float = 0.1,
    seed: int = 0,
    init_scale: float = 0.0,
) -> np.ndarray:
    """Learn feature-to-label edge weights and return their rescaled magnitudes.

    The label node activation is ``sigmoid(sum_i w_i a_i)`` with the feature
    values as input activations. Weights follow full-batch gradient descent
    on the mean squared activation error. Multi-class labels are handled one
    class at a time (one-vs-rest) and the absolute weights are averaged.

    ``seed`` only matters when ``init_scale > 0``; the default zero start is
    already deterministic and treats all features symmetrically.
    """
    if epochs < 1 or learning_rate <= 0:
        raise ValueError("epochs and learning_rate must be positive")
    x = train.features
    n, d = x.shape
    targets = (
        [train.labels == 1]
        if train.n_classes == 2
        else [train.labels == c for c in range(train.n_classes)]
    )
    rng = np.random.default_rng(seed)
    magnitude = np.zeros(d)
    for target in targets:
        y = target.astype(float)
        w = init_scale * rng.uniform(-1.0, 1.0, d)
        for _ in range(epochs):
            a_y = _sigmoid(x @ w)
            delta = (a_y - y) * a_y * (1.0 - a_y)
            w -= learning_rate * (x.T @ delta) / n
        magnitude += np.abs(w)
    magnitude /= len(targets)
    top = magnitude.max()
    if top <= 0.0:
        return np.ones(d)
    return magnitude / top


def compute_feature_stats(
    train: Dataset,
    epochs: int = 200,
    learning_rate: float = 0.1,
    seed: int = 0,
    reduction: str = "mean",
    include_diagonal: bool = False,
) -> FeatureStats:
    """Relevance and redundancy statistics for a normalised training split."""
    q = fcm_learn(train, epochs, learning_rate, seed)
    a, a_index, tau = redundancy_stats(train, reduction, include_diagonal)
    for arr in (q, a, a_index):
        arr.setflags(write=False)
    return FeatureStats(q, a, a_index, tau)

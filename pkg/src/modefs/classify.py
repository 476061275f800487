"""k-NN wrapper evaluation of feature masks.

A mask is scored by the pair (feature ratio, error rate). During the search
the error rate is the leave-one-out k-NN error on the training split; the
untouched test split is only used by :func:`holdout_error` for reporting.

Tie rules are fixed so every evaluation is reproducible: among equally
distant training rows the lower row index is nearer, and a vote tie is won by
whichever tied class owns the nearest neighbour.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from modefs.data import Dataset

DEFAULT_K = 5


class ObjectivePair(NamedTuple):
    """Both objectives are minimised and lie in [0, 1]."""

    fr: float
    er: float


def _squared_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # column-by-column accumulation keeps identical rows at exactly zero distance
    out = np.zeros((a.shape[0], b.shape[0]))
    for j in range(a.shape[1]):
        diff = a[:, j, None] - b[None, :, j]
        out += diff * diff
    return out


def _vote(neighbour_labels: np.ndarray, n_classes: int) -> np.ndarray:
    """Majority label per row of an (n, k) array ordered nearest first."""
    n, k = neighbour_labels.shape
    rows = np.arange(n)
    counts = np.zeros((n, n_classes), dtype=np.int64)
    np.add.at(counts, (np.repeat(rows, k), neighbour_labels.ravel()), 1)
    best = counts.max(axis=1)
    is_winner = counts[rows[:, None], neighbour_labels] == best[:, None]
    return neighbour_labels[rows, np.argmax(is_winner, axis=1)]


def _predict_from_distances(
    d2: np.ndarray, train_labels: np.ndarray, k: int, n_classes: int
) -> np.ndarray:
    order = np.argsort(d2, axis=1, kind="stable")[:, :k]
    return _vote(train_labels[order], n_classes)


def _check_k(k: int, n_train: int) -> None:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if k > n_train:
        raise ValueError(f"k={k} exceeds the {n_train} available training rows")


def knn_predict(
    train_features: np.ndarray,
    train_labels: np.ndarray,
    query: np.ndarray,
    k: int = DEFAULT_K,
) -> int:
    """Classify one query point by Euclidean k-NN majority vote.

    ``train_features`` and ``query`` must already be restricted to the
    selected columns.
    """
    train_features = np.atleast_2d(np.asarray(train_features, dtype=float))
    query = np.asarray(query, dtype=float).reshape(1, -1)
    train_labels = np.asarray(train_labels, dtype=np.int64)
    if train_features.shape[1] == 0:
        raise ValueError("empty feature mask")
    if query.shape[1] != train_features.shape[1]:
        raise ValueError("query and training rows have different lengths")
    _check_k(k, train_features.shape[0])
    d2 = _squared_distances(query, train_features)
    return int(_predict_from_distances(d2, train_labels, k, int(train_labels.max()) + 1)[0])


def loocv_error(features: np.ndarray, labels: np.ndarray, k: int, n_classes: int) -> float:
    """Leave-one-out k-NN error of an already column-restricted matrix."""
    n = features.shape[0]
    _check_k(k, n - 1)
    d2 = _squared_distances(features, features)
    np.fill_diagonal(d2, np.inf)
    pred = _predict_from_distances(d2, labels, k, n_classes)
    return float(np.count_nonzero(pred != labels)) / n


def evaluate(mask: np.ndarray, train: Dataset, k: int = DEFAULT_K) -> ObjectivePair:
    """Objective pair of ``mask`` on ``train``.

    An empty mask scores (0, 1) without touching the classifier.
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (train.n_features,):
        raise ValueError(f"mask has shape {mask.shape}, expected ({train.n_features},)")
    m = int(mask.sum())
    if m == 0:
        return ObjectivePair(0.0, 1.0)
    er = loocv_error(train.features[:, mask], train.labels, k, train.n_classes)
    return ObjectivePair(m / train.n_features, er)


def holdout_error(mask: np.ndarray, train: Dataset, test: Dataset, k: int = DEFAULT_K) -> float:
    """Fraction of ``test`` misclassified by k-NN fitted on ``train``."""
    mask = np.asarray(mask, dtype=bool)
    if train.n_features != test.n_features:
        raise ValueError("train and test have different feature counts")
    if not mask.any():
        raise ValueError("empty feature mask")
    _check_k(k, train.n_instances)
    d2 = _squared_distances(test.features[:, mask], train.features[:, mask])
    n_classes = max(train.n_classes, test.n_classes)
    pred = _predict_from_distances(d2, train.labels, k, n_classes)
    return float(np.count_nonzero(pred != test.labels)) / test.n_instances


class Evaluator:
    """Memoising objective function for one training split.

    Evaluation is a pure function of the mask, so results are cached by mask
    bytes; the cache never changes an answer, only skips recomputation.
    """

    def __init__(self, train: Dataset, k: int = DEFAULT_K):
        self.train = train
        self.k = k
        self.n_calls = 0
        self._cache: dict[bytes, ObjectivePair] = {}

    @property
    def n_evaluations(self) -> int:
        """Number of distinct masks actually scored."""
        return len(self._cache)

    def __call__(self, mask: np.ndarray) -> ObjectivePair:
        mask = np.asarray(mask, dtype=bool)
        key = np.packbits(mask).tobytes()
        self.n_calls += 1
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = evaluate(mask, self.train, self.k)
        return hit

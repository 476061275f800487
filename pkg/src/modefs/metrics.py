"""Front quality indicators and exhaustive ground-truth fronts."""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from modefs.classify import DEFAULT_K, Evaluator
from modefs.data import Dataset
from modefs.evo_core import Front, nondominated_ranks

MAX_EXHAUSTIVE_FEATURES = 20


@dataclass(frozen=True)
class ReferenceFront:
    """Nondominated objective points, strictly increasing in fr."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    @classmethod
    def from_points(cls, points: np.ndarray) -> ReferenceFront:
        """Nondominated, de-duplicated subset of ``points`` sorted by fr."""
        return cls(nondominated_points(points))

    def to_csv(self, path: str | Path) -> None:
        write_points_csv(path, self.points)

    @classmethod
    def from_csv(cls, path: str | Path) -> ReferenceFront:
        return cls.from_points(read_points_csv(path))


def _as_points(front: Front | ReferenceFront | np.ndarray) -> np.ndarray:
    if isinstance(front, (Front, ReferenceFront)):
        pts = front.objectives if isinstance(front, Front) else front.points
    else:
        pts = front
    return np.asarray(pts, dtype=float).reshape(-1, 2)


def nondominated_points(points: np.ndarray) -> np.ndarray:
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if pts.shape[0] == 0:
        return pts
    return pts[nondominated_ranks(pts) == 0]


def hypervolume(
    front: Front | ReferenceFront | np.ndarray, ref_point: tuple[float, float] = (1.0, 1.0)
) -> float:
    """Exact 2-D hypervolume dominated by ``front`` and bounded by ``ref_point``.

    Points not strictly better than the reference on both axes add nothing
    and are dropped. The remaining nondominated points are swept in
    ascending fr order, each contributing a slab up to the next point's fr.
    """
    r1, r2 = ref_point
    pts = _as_points(front)
    pts = pts[(pts[:, 0] < r1) & (pts[:, 1] < r2)]
    if pts.shape[0] == 0:
        return 0.0
    pts = nondominated_points(pts)
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    next_f1 = np.append(pts[1:, 0], r1)
    return float(np.sum((next_f1 - pts[:, 0]) * (r2 - pts[:, 1])))


def igd(front: Front | ReferenceFront | np.ndarray, reference: ReferenceFront | np.ndarray) -> float:
    """Mean distance from each reference point to its nearest front point.

    An empty front gives ``inf``.
    """
    ref = _as_points(reference)
    if ref.shape[0] == 0:
        raise ValueError("reference front is empty")
    pts = _as_points(front)
    if pts.shape[0] == 0:
        return float("inf")
    dist = np.sqrt(((ref[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    return float(dist.min(axis=1).mean())


def exhaustive_pareto(
    train: Dataset, k: int = DEFAULT_K, max_features: int = MAX_EXHAUSTIVE_FEATURES
) -> ReferenceFront:
    """True Pareto front by scoring all ``2^D - 1`` nonempty masks."""
    d = train.n_features
    if d > max_features:
        raise ValueError(f"{d} features exceed the exhaustive limit of {max_features}")
    evaluator = Evaluator(train, k)
    objs = np.empty((2**d - 1, 2))
    for code, bits in enumerate(itertools.product((False, True), repeat=d)):
        if code == 0:
            continue
        objs[code - 1] = evaluator(np.array(bits[::-1]))
    return ReferenceFront.from_points(objs)


def write_points_csv(path: str | Path, points: np.ndarray) -> None:
    """Write an ``fr,er`` CSV with round-trippable float text."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["fr", "er"])
        for fr, er in np.asarray(points, dtype=float).reshape(-1, 2):
            writer.writerow([repr(float(fr)), repr(float(er))])


def read_points_csv(path: str | Path) -> np.ndarray:
    """Read the ``fr`` and ``er`` columns of any CSV that has them.

    A run's ``front.csv`` is accepted too: its ``train_er`` column stands in
    for ``er``.
    """
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        names = set(reader.fieldnames or ())
        er_col = "er" if "er" in names else "train_er"
        if not {"fr", er_col} <= names:
            raise ValueError(f"{path}: needs 'fr' and 'er' columns")
        rows = [(float(r["fr"]), float(r[er_col])) for r in reader]
    return np.array(rows, dtype=float).reshape(-1, 2)

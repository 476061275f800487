"""Dataset loading, min-max scaling and stratified train/test splitting."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class DatasetError(ValueError):
    """Raised when a table cannot be turned into a valid :class:`Dataset`."""


@dataclass(frozen=True)
class Dataset:
    """Feature matrix with integer class labels.

    ``features`` has one row per instance. Labels are 0-based class indices.
    The arrays are made read-only so a dataset can be shared between
    evaluators without copying.
    """

    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    n_classes: int
    class_names: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        features = np.array(self.features, dtype=float)
        labels = np.array(self.labels, dtype=np.int64)
        if features.ndim != 2:
            raise DatasetError(f"features must be 2-D, got shape {features.shape}")
        if labels.shape != (features.shape[0],):
            raise DatasetError(
                f"{features.shape[0]} feature rows but {labels.shape[0]} labels"
            )
        if features.shape[0] < 2 or features.shape[1] < 1:
            raise DatasetError("need at least 2 instances and 1 feature")
        if self.n_classes < 2:
            raise DatasetError("fewer than 2 classes")
        if labels.min() < 0 or labels.max() >= self.n_classes:
            raise DatasetError("labels must lie in [0, n_classes)")
        if len(self.feature_names) != features.shape[1]:
            raise DatasetError("feature_names length does not match feature count")
        features.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "class_names", tuple(self.class_names))

    @property
    def n_instances(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def subset(self, rows: np.ndarray) -> Dataset:
        """Return the dataset restricted to ``rows`` (same classes and names)."""
        rows = np.asarray(rows)
        return Dataset(
            self.features[rows],
            self.labels[rows],
            self.feature_names,
            self.n_classes,
            self.class_names,
        )

    def with_features(self, features: np.ndarray) -> Dataset:
        return Dataset(features, self.labels, self.feature_names, self.n_classes, self.class_names)


def load_csv(path: str | Path, label_column: str | int = -1) -> Dataset:
    """Read a comma-separated table with a header row.

    Args:
        path: CSV file (UTF-8, ``.`` decimal point).
        label_column: Column name, or zero-based index (negative indices count
            from the end). Defaults to the last column.

    Returns:
        The raw, unnormalised dataset. Class labels are numbered in order of
        first appearance.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"dataset file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if len(rows) < 2:
        raise DatasetError(f"{path}: need a header row and at least one data row")
    header, body = [h.strip() for h in rows[0]], rows[1:]

    if isinstance(label_column, str) and not _is_int(label_column):
        if label_column not in header:
            raise DatasetError(f"{path}: label column {label_column!r} not in header")
        label_idx = header.index(label_column)
    else:
        label_idx = int(label_column)
        if not -len(header) <= label_idx < len(header):
            raise DatasetError(f"{path}: label column index {label_idx} out of range")
        label_idx %= len(header)

    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise DatasetError(
                f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}"
            )

    feature_cols = [j for j in range(len(header)) if j != label_idx]
    features = np.empty((len(body), len(feature_cols)))
    for i, row in enumerate(body):
        for out_j, j in enumerate(feature_cols):
            try:
                features[i, out_j] = float(row[j])
            except ValueError:
                raise DatasetError(
                    f"{path}:{i + 2}: non-numeric value {row[j]!r} in column {header[j]!r}"
                ) from None

    class_ids: dict[str, int] = {}
    labels = np.empty(len(body), dtype=np.int64)
    for i, row in enumerate(body):
        labels[i] = class_ids.setdefault(row[label_idx].strip(), len(class_ids))
    if len(class_ids) < 2:
        raise DatasetError(f"{path}: fewer than 2 classes in label column")

    return Dataset(
        features,
        labels,
        tuple(header[j] for j in feature_cols),
        len(class_ids),
        tuple(class_ids),
    )


def _is_int(text: str) -> bool:
    try:
        int(text)
    except ValueError:
        return False
    return True


def fit_minmax(features: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Column minima and ranges; a zero range marks a constant column."""
    lo = features.min(axis=0)
    return lo, features.max(axis=0) - lo


def apply_minmax(features: np.ndarray, lo: np.ndarray, span: np.ndarray) -> np.ndarray:
    """Scale with previously fitted parameters, clipping into [0, 1].

    Constant columns (zero span) map to zero.
    """
    safe = np.where(span > 0, span, 1.0)
    scaled = np.where(span > 0, (features - lo) / safe, 0.0)
    return np.clip(scaled, 0.0, 1.0)


def normalize(d: Dataset) -> Dataset:
    """Min-max scale every column of ``d`` to [0, 1]."""
    lo, span = fit_minmax(d.features)
    return d.with_features(apply_minmax(d.features, lo, span))


def normalize_split(train: Dataset, test: Dataset) -> tuple[Dataset, Dataset]:
    """Fit min-max scaling on ``train`` and apply it to both splits.

    Test values outside the training range are clipped so both outputs stay
    in [0, 1].
    """
    lo, span = fit_minmax(train.features)
    return (
        train.with_features(apply_minmax(train.features, lo, span)),
        test.with_features(apply_minmax(test.features, lo, span)),
    )


def stratified_split(
    d: Dataset, train_fraction: float = 0.6, seed: int = 0
) -> tuple[Dataset, Dataset]:
    """Split ``d`` into train and test sets class by class.

    Each class contributes ``round(train_fraction * count)`` instances to the
    training side (half-up rounding), clamped so both sides get at least one.
    Row order inside each side follows the original dataset order.
    """
    if not 0.0 < train_fraction < 1.0:
        raise DatasetError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    rng = np.random.default_rng(seed)
    train_rows: list[np.ndarray] = []
    for c in range(d.n_classes):
        members = np.flatnonzero(d.labels == c)
        if members.size < 2:
            raise DatasetError(
                f"class {c} has {members.size} instance(s); stratified split needs at least 2"
            )
        n_train = math.floor(train_fraction * members.size + 0.5)
        n_train = min(max(n_train, 1), members.size - 1)
        train_rows.append(rng.permutation(members)[:n_train])
    in_train = np.zeros(d.n_instances, dtype=bool)
    in_train[np.concatenate(train_rows)] = True
    return d.subset(np.flatnonzero(in_train)), d.subset(np.flatnonzero(~in_train))

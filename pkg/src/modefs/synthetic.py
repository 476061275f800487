"""Seeded synthetic classification problems with known structure."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from modefs.data import Dataset

KINDS = ("separable", "noisy", "duplicated", "mixed")


def make_dataset(
    kind: str,
    n_features: int,
    n_instances: int = 120,
    seed: int = 0,
    n_informative: int = 3,
) -> Dataset:
    """Two-class dataset of a given flavour.

    * ``separable``: feature 0 is the class label itself; the rest is noise.
    * ``noisy``: ``n_informative`` Gaussian features with overlapping class
      means plus uniform noise, so no subset reaches zero error.
    * ``duplicated``: like ``noisy`` but the informative block is repeated,
      giving exactly redundant column pairs.
    * ``mixed``: informative features of decreasing strength, noise
      columns and one near-copy of the strongest feature.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown synthetic kind {kind!r}; choose from {KINDS}")
    rng = np.random.default_rng(seed)
    y = np.arange(n_instances) % 2
    rng.shuffle(y)
    x = rng.random((n_instances, n_features))
    sign = 2.0 * y - 1.0
    if kind == "separable":
        x[:, 0] = y
    elif kind in ("noisy", "duplicated"):
        n_inf = min(n_informative, n_features)
        for j in range(n_inf):
            x[:, j] = sign * (0.9 - 0.2 * j) + rng.normal(0.0, 1.0, n_instances)
        if kind == "duplicated":
            for j in range(n_inf):
                if n_inf + j < n_features:
                    x[:, n_inf + j] = x[:, j]
    else:
        n_inf = min(n_informative, n_features - 1)
        for j in range(n_inf):
            x[:, j] = sign * (1.5 / (j + 1)) + rng.normal(0.0, 1.0, n_instances)
        x[:, n_inf] = x[:, 0] + rng.normal(0.0, 0.05, n_instances)
    return Dataset(x, y, tuple(f"f{j}" for j in range(n_features)), 2, ("a", "b"))


def write_csv(d: Dataset, path: str | Path) -> Path:
    """Write ``d`` as a CSV with a trailing ``class`` column."""
    path = Path(path)
    names = d.class_names or tuple(str(c) for c in range(d.n_classes))
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([*d.feature_names, "class"])
        for row, label in zip(d.features, d.labels):
            writer.writerow([*(repr(float(v)) for v in row), names[label]])
    return path

"""
Scoring a feature subset
========================

Every candidate is a boolean mask over the columns. It is scored by two
numbers, both minimised: the fraction of columns kept and the
leave-one-out error of a 5-nearest-neighbour classifier on the training
split.
"""

import numpy as np

from modefs.data import normalize_split, stratified_split
from modefs.classify import evaluate, holdout_error
from modefs.synthetic import make_dataset

# 10 columns; the first three carry the class signal with shrinking strength
data = make_dataset("noisy", n_features=10, n_instances=120, seed=0)
train, test = stratified_split(data, train_fraction=0.6, seed=0)
print(train.n_instances, "training rows,", test.n_instances, "test rows")

# min-max scaling is fitted on the training rows only
train, test = normalize_split(train, test)
for cols in ([0], [0, 1, 2], list(range(10)), [7, 8, 9]):
    mask = np.zeros(10, dtype=bool)
    mask[cols] = True
    fr, er = evaluate(mask, train)
    print(f"columns {cols!s:32} fr={fr:.2f} er={er:.3f}")

# the empty subset is legal but useless: it always scores (0, 1)
print(evaluate(np.zeros(10, dtype=bool), train))

# holdout error uses the training rows as the neighbour pool
print("holdout error, first three columns:", holdout_error(np.arange(10) < 3, train, test))

"""
Relevance and redundancy
========================

Two per-feature summaries steer the search. ``q`` ranks how strongly each
column drives the label (learned by a one-layer logistic map), and
``a_index`` measures how much a column resembles the others (mean cosine
similarity). ``tau`` is the median pairwise similarity.
"""

import numpy as np

from modefs.data import normalize
from modefs.stats import compute_feature_stats
from modefs.synthetic import make_dataset
from modefs.wrbi import split_weight_pools

train = normalize(make_dataset("mixed", n_features=8, n_instances=150, seed=1, n_informative=3))
stats = compute_feature_stats(train)

np.set_printoptions(precision=3, suppress=True)
print("q       ", stats.q)
print("a_index ", stats.a_index)
print("tau      %.3f" % stats.tau)

# the top 60% of columns by q form the pool most initial subsets draw from
pools = split_weight_pools(stats.q)
print("high-weight pool:", pools.high_weight, " low-weight pool:", pools.low_weight)

# columns that pass both gates of the update step; on [0, 1]-scaled data
# the cosine scores sit close together, so this set is small or empty and the
# update then falls back to the single highest-q column
gate = (stats.a_index < stats.tau) & (stats.q > stats.q.mean())
print("columns the update step may switch on:", np.flatnonzero(gate))

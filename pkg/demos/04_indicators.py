"""
Measuring fronts
================

With ten columns all 1023 nonempty subsets can be scored, which gives the
exact front. Repeated runs are then compared against it by inverted
generational distance (IGD, lower is better) and hypervolume against the
reference point (1, 1) (HV, higher is better).
"""

from modefs.engine import RunConfig, prepare, run_batch
from modefs.metrics import exhaustive_pareto, hypervolume
from modefs.synthetic import make_dataset

data = make_dataset("noisy", n_features=10, n_instances=120, seed=0)
config = RunConfig(pop_size=50, max_generations=50, seed=0)

exact = exhaustive_pareto(prepare(config, data).train)
print("exact front:", exact.points.round(4).tolist())
print("exact front HV: %.4f" % hypervolume(exact))

batch = run_batch(config, data, n_runs=10, reference=exact)
for name, s in batch.summary().items():
    print(f"{name}: mean {s['mean']:.4f}  std {s['std']:.4f}  median {s['median']:.4f}")

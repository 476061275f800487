"""
One optimisation run
====================

Initialise from the relevance pools, then alternate the mutation-selection
update with grid-based refinement. The result is the nondominated set of the
final population, with holdout errors on the test split.
"""

from pathlib import Path

from modefs.engine import RunConfig, export, run
from modefs.synthetic import make_dataset

data = make_dataset("mixed", n_features=20, n_instances=120, seed=0, n_informative=5)
config = RunConfig(pop_size=40, max_generations=50, seed=0)
result = run(config, data)

print("HV by generation (every 10th):", [round(h, 4) for h in result.hv_trace[::10]])
print(f"{len(result.front)} front members, {result.n_evaluations} fitness requests")
for mask, (fr, er), te in zip(result.front.masks, result.front.objectives, result.test_er):
    cols = [j for j, b in enumerate(mask) if b]
    print(f"  fr={fr:.2f} train er={er:.3f} test er={te:.3f} columns {cols}")

out = Path("demo_out") / "single_run"
for path in export(result, out):
    print("wrote", path)

"""
Compare the four bundled minimisers on 10-dimensional Rastrigin.

Prints the aggregate table; the per-seed table is in ``rep.to_markdown()``.
"""

# %%
import numpy as np

from evsite.rastrigin import local_min_lattice, local_min_value, run_bench

# %% local minima sit next to integer points; their values form a lattice
print("l(1), l(2) =", round(local_min_value(1), 4), round(local_min_value(2), 4))

# %% 10 seeds per solver, 1e4 energy evaluations per run
rep = run_bench(["sa", "ga", "pso", "patternsearch"], n=10, budget=10_000, seeds=range(10))
for name, agg in rep.aggregates().items():
    print(f"{name:>14}  median {agg['median']:.3g}  min {agg['min']:.3g}  max {agg['max']:.3g}")

# %% annealing usually stops in a non-global basin: check against the lattice
lattice = np.array(local_min_lattice(10, 3))
sa = [r.objective for r in rep.rows if r.solver == "sa"]
near = [float(lattice[np.argmin(np.abs(lattice - v))]) for v in sa]
print("SA finals snapped to lattice:", np.round(near, 4).tolist())

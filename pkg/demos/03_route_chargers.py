"""
Route a service vehicle through charger sites with 2-opt annealing.

Writes ``tour.svg`` to ``argv[1]`` (default: the working directory).
"""

# %%
import sys
from pathlib import Path

import numpy as np

from evsite import GenConfig, generate_instance
from evsite.metaheuristics import AnnealSchedule
from evsite.spatial import fixed
from evsite.svg import render_svg
from evsite.tsp import TspInstance, random_tsp_instance, tsp_anneal, tsp_brute_force

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(".")

# %% small case: annealing against exhaustive enumeration
small = random_tsp_instance(8, seed=4)
tour, _ = tsp_anneal(small, AnnealSchedule(k_max=20_000), seed=0)
best = tsp_brute_force(small)
print(f"8 points: anneal {tour.length:.3f}, optimum {best.length:.3f}")

# %% 50 sites: the best-so-far trace only goes down
inst = generate_instance(GenConfig(facilities=fixed(50), customers=fixed(1), seed=1))
tsp = TspInstance.from_instance(inst)
tour, trace = tsp_anneal(tsp, AnnealSchedule(k_max=15_000), seed=0)
print(f"50 points: random start {trace.initial_energy:.1f} -> {tour.length:.1f}")
print("best length at 10% steps:", np.round(trace.best_history[:: len(trace.best_history) // 10], 1).tolist())
(out / "tour.svg").write_text(render_svg(inst, tour=tour))

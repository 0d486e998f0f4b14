"""
Place chargers on a generated instance, exactly and by annealing.

Run with ``python3 demos/01_place_chargers.py [outdir]``; an SVG map of
each solution is written to ``outdir`` (default: the working directory).
"""

# %%
import sys
from pathlib import Path

import numpy as np

from evsite import BnbConfig, GenConfig, ModelConfig, generate_instance, lp_bound, solve_exact
from evsite.metaheuristics import AnnealSchedule, flp_anneal
from evsite.model import equity_penalty
from evsite.spatial import fixed
from evsite.svg import render_svg

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(".")

# %% 8 candidate sites and 20 customers, uniform over a 100 x 100 region
inst = generate_instance(GenConfig(facilities=fixed(8), customers=fixed(20), seed=3))
print(f"{inst.n} sites, {inst.m} customers, total demand {inst.demands.sum():.1f}")

# %% the LP relaxation bounds every integer solution from below
cfg = ModelConfig("full", 0.0)
print("LP bound     ", round(lp_bound(inst, cfg, [None] * inst.n), 3))

# %% branch and bound closes the gap
rep = solve_exact(inst, cfg, BnbConfig(node_limit=500))
print("exact        ", rep.status, round(rep.solution.objective_total, 3), "nodes", rep.nodes_explored)
print("open sites   ", np.flatnonzero(rep.solution.open).tolist())
(out / "exact.svg").write_text(render_svg(inst, solution=rep.solution))

# %% annealing over open sets handles the nonlinear equity term too
# under full service every customer is fully served, so Gini stays 0
sched = AnnealSchedule(k_max=600)
for w in (0.0, 1e3):
    ann = flp_anneal(inst, ModelConfig("full", w), sched, seed=0)
    gini = equity_penalty(inst, ann.solution.assign)
    print(f"anneal w={w:<6}", round(ann.solution.objective_total, 3), "gini", round(gini, 4))
(out / "anneal.svg").write_text(render_svg(inst, solution=ann.solution))

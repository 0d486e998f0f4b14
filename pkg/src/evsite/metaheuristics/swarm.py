"""
Particle swarm optimisation.

Two velocity rules are available:

* ``"global"``: the canonical inertia-weight update
  ``v = w v + c1 r1 (pbest - x) + c2 r2 (gbest - x)``.
* ``"comprehensive"``: comprehensive learning, where every coordinate
  of a particle follows the personal best of an exemplar particle chosen
  by tournament, ``v = w v + c1 r (exemplar - x)``.  Exemplars are
  refreshed after ``refresh_gap`` iterations without improvement.  This
  keeps diversity on separable multimodal landscapes.

Velocities are clamped to ``vmax_fraction`` of the range and particles
leaving the box are reflected back with their velocity reversed.  An
optional pattern-search polish of the swarm best can spend the tail of
the budget.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..spatial import make_rng
from .pattern import PatternConfig, pattern_search
from .problem import BlackBoxProblem, RunTrace

__all__ = ["PsoConfig", "particle_swarm", "BENCH_PSO"]


@dataclass(frozen=True)
class PsoConfig:
    swarm_size: int = 50
    max_evaluations: int = 10_000
    inertia: float = 0.729
    inertia_end: float | None = None  # linear decay target; None keeps it constant
    c1: float = 1.49445
    c2: float = 1.49445
    vmax_fraction: float = 0.2
    learning: str = "global"
    refresh_gap: int = 7
    polish_fraction: float = 0.0
    polish_mesh: float = 0.05

    def __post_init__(self):
        if self.swarm_size < 1:
            raise ValueError("swarm_size must be >= 1")
        if self.learning not in ("global", "comprehensive"):
            raise ValueError("learning must be 'global' or 'comprehensive'")
        if not 0 <= self.polish_fraction < 1:
            raise ValueError("polish_fraction must lie in [0, 1)")
        if self.max_evaluations < self.swarm_size:
            raise ValueError("max_evaluations must cover the initial swarm")


BENCH_PSO = PsoConfig(
    swarm_size=10,
    inertia=0.9,
    inertia_end=0.1,
    learning="comprehensive",
    polish_fraction=0.1,
)


def _learning_probs(k: int) -> np.ndarray:
    if k == 1:
        return np.array([0.05])
    a = np.arange(k) / (k - 1)
    return 0.05 + 0.45 * (np.exp(10 * a) - 1) / (np.exp(10) - 1)


def particle_swarm(p: BlackBoxProblem, cfg: PsoConfig, seed: int, positions=None, velocities=None) -> RunTrace:
    """
    Minimise ``p`` with a particle swarm.

    ``positions`` and ``velocities`` override the random initial swarm
    (shape ``(swarm_size, dimension)``).
    """
    if not p.is_continuous:
        raise ValueError("particle_swarm needs a bounded continuous problem")
    rng = make_rng(seed)
    lo, hi = p.lower, p.upper
    k, dim = cfg.swarm_size, p.dimension
    width = hi - lo
    vmax = cfg.vmax_fraction * width
    X = rng.uniform(lo, hi, size=(k, dim)) if positions is None else p.clip(np.array(positions, dtype=float).reshape(k, dim))
    V = rng.uniform(-vmax, vmax, size=(k, dim)) if velocities is None else np.array(velocities, dtype=float).reshape(k, dim)
    f = np.array([p.energy(x) for x in X], dtype=float)
    P, pf = X.copy(), f.copy()
    hist = list(np.minimum.accumulate(f))
    evals = k

    polish_budget = int(cfg.polish_fraction * cfg.max_evaluations)
    swarm_budget = cfg.max_evaluations - polish_budget
    iters = max(1, (swarm_budget - k) // k)
    t = 0

    comprehensive = cfg.learning == "comprehensive"
    if comprehensive:
        pc = _learning_probs(k)
        stall = np.zeros(k, dtype=int)
        exemplar = np.zeros((k, dim), dtype=int)

        def new_exemplar(i):
            e = np.full(dim, i)
            pick = rng.random(dim) < pc[i]
            pairs = rng.integers(k, size=(dim, 2))
            for d in np.flatnonzero(pick):
                a, b = pairs[d]
                e[d] = a if pf[a] <= pf[b] else b
            if k > 1 and np.all(e == i):
                e[int(rng.random() * dim)] = int(rng.random() * k)
            return e

        for i in range(k):
            exemplar[i] = new_exemplar(i)
    cols = np.arange(dim)[None, :]

    while evals + k <= swarm_budget:
        w = cfg.inertia if cfg.inertia_end is None else cfg.inertia + (cfg.inertia_end - cfg.inertia) * t / iters
        t += 1
        if comprehensive:
            for i in np.flatnonzero(stall >= cfg.refresh_gap):
                exemplar[i] = new_exemplar(i)
                stall[i] = 0
            guide = P[exemplar, cols]
            V = w * V + cfg.c1 * rng.random((k, dim)) * (guide - X)
        else:
            g = int(np.argmin(pf))
            V = w * V + cfg.c1 * rng.random((k, dim)) * (P - X) + cfg.c2 * rng.random((k, dim)) * (P[g] - X)
        V = np.clip(V, -vmax, vmax)
        X = X + V
        over, under = X > hi, X < lo
        X = np.where(over, 2 * hi - X, X)
        X = np.where(under, 2 * lo - X, X)
        V = np.where(over | under, -V, V)
        X = np.clip(X, lo, hi)
        f = np.array([p.energy(x) for x in X], dtype=float)
        evals += k
        improved = f < pf
        P[improved], pf[improved] = X[improved], f[improved]
        if comprehensive:
            stall[improved] = 0
            stall[~improved] += 1
        hist.extend(np.minimum.accumulate(np.minimum(f, hist[-1])))

    g = int(np.argmin(pf))
    best_x, best_f = P[g].copy(), float(pf[g])
    notes = (f"swarm_iterations={t}",)
    remaining = cfg.max_evaluations - evals
    if polish_budget and remaining > 0:
        pol = pattern_search(
            p, PatternConfig(initial_mesh=cfg.polish_mesh, expansion=1.0, max_evaluations=remaining), best_x
        )
        evals += pol.evaluations
        hist.extend(np.minimum(pol.best_history, hist[-1]))
        if pol.best_energy < best_f:
            best_x, best_f = pol.best_state.copy(), pol.best_energy
        notes += (f"polish_evaluations={pol.evaluations}",)

    return RunTrace(
        best_history=np.array(hist),
        state=best_x,
        energy=best_f,
        best_state=best_x,
        best_energy=best_f,
        iterations=evals,
        evaluations=evals,
        seed=seed,
        notes=notes,
    )

"""Real-coded genetic algorithm for bounded continuous problems."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..spatial import make_rng
from .problem import BlackBoxProblem, RunTrace

__all__ = ["GaConfig", "genetic_algorithm"]


@dataclass(frozen=True)
class GaConfig:
    """
    Parameters
    ----------
    population : int
        Individuals per generation (>= 2).
    max_evaluations : int
        Evaluation budget, initial population included.
    tournament : int
        Tournament size for parent selection.
    crossover : {"uniform", "arithmetic"}
    crossover_rate : float
        Probability a child is produced by crossover rather than copied.
    mutation_rate : float, optional
        Per-gene mutation probability; defaults to ``1 / dimension``.
    mutation_scale : float
        Gaussian sigma as a fraction of each coordinate's range.
    shrink : float
        Linear decay of the sigma over the run (0 keeps it constant).
    """

    population: int = 50
    max_evaluations: int = 10_000
    tournament: int = 2
    crossover: str = "uniform"
    crossover_rate: float = 0.8
    mutation_rate: float | None = None
    mutation_scale: float = 0.1
    shrink: float = 0.0

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be >= 2")
        if self.crossover not in ("uniform", "arithmetic"):
            raise ValueError("crossover must be 'uniform' or 'arithmetic'")
        if self.tournament < 1 or self.max_evaluations < self.population:
            raise ValueError("need tournament >= 1 and max_evaluations >= population")


def genetic_algorithm(p: BlackBoxProblem, cfg: GaConfig, seed: int, initial=None) -> RunTrace:
    """
    Minimise ``p`` with a generational GA keeping one elite.

    Each generation draws parents by tournament, recombines them, applies
    Gaussian mutation clipped to the bounds and carries the best
    individual over unchanged.
    """
    if not p.is_continuous:
        raise ValueError("genetic_algorithm needs a bounded continuous problem")
    rng = make_rng(seed)
    lo, hi = p.lower, p.upper
    dim, pop = p.dimension, cfg.population
    pm = 1.0 / dim if cfg.mutation_rate is None else cfg.mutation_rate
    X = rng.uniform(lo, hi, size=(pop, dim)) if initial is None else p.clip(np.array(initial, dtype=float).reshape(pop, dim))
    f = np.array([p.energy(x) for x in X], dtype=float)
    hist = list(np.minimum.accumulate(f))
    evals = pop
    n_kids = pop - 1
    generations = max(1, (cfg.max_evaluations - pop) // n_kids)
    g = 0

    def select(k):
        cand = rng.integers(pop, size=(k, cfg.tournament))
        return cand[np.arange(k), np.argmin(f[cand], axis=1)]

    while evals + n_kids <= cfg.max_evaluations:
        e = int(np.argmin(f))
        a, b = X[select(n_kids)], X[select(n_kids)]
        if cfg.crossover == "uniform":
            kids = np.where(rng.random((n_kids, dim)) < 0.5, a, b)
        else:
            w = rng.random((n_kids, 1))
            kids = w * a + (1 - w) * b
        copy = rng.random(n_kids) >= cfg.crossover_rate
        kids[copy] = a[copy]
        sigma = cfg.mutation_scale * (hi - lo) * max(0.0, 1.0 - cfg.shrink * g / generations)
        mask = rng.random((n_kids, dim)) < pm
        kids = np.clip(kids + mask * rng.standard_normal((n_kids, dim)) * sigma, lo, hi)
        fk = np.array([p.energy(x) for x in kids], dtype=float)
        best_so_far = hist[-1]
        hist.extend(np.minimum.accumulate(np.minimum(fk, best_so_far)))
        evals += n_kids
        X = np.vstack([X[e], kids])
        f = np.concatenate([[f[e]], fk])
        g += 1

    b = int(np.argmin(f))
    return RunTrace(
        best_history=np.array(hist),
        state=X[b].copy(),
        energy=float(f[b]),
        best_state=X[b].copy(),
        best_energy=float(f[b]),
        iterations=evals,
        evaluations=evals,
        seed=seed,
        notes=(f"generations={g}",),
    )

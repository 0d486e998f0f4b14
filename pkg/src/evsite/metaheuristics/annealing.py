"""Simulated annealing, generic and applied to the open/close FLP search."""

from __future__ import annotations

import math

import numpy as np

from ..bnb import BnbReport
from ..instance import FlpInstance
from ..lp import assign_for_open_set
from ..model import ModelConfig, check_feasible, evaluate, package_solution
from ..spatial import make_rng
from .problem import AnnealSchedule, BlackBoxProblem, RunTrace

__all__ = ["estimate_initial_temp", "simulated_annealing", "flp_problem", "flp_anneal"]


def estimate_initial_temp(problem: BlackBoxProblem, rng: np.random.Generator, samples: int = 100) -> float:
    """Standard deviation of the energy over ``samples`` random states (finite ones only)."""
    energies = np.array([problem.energy(problem.sample(rng)) for _ in range(samples)], dtype=float)
    energies = energies[np.isfinite(energies)]
    t0 = float(np.std(energies)) if energies.size >= 2 else 0.0
    return t0 if t0 > 0 else 1.0


def simulated_annealing(problem: BlackBoxProblem, sched: AnnealSchedule, seed: int, initial=None) -> RunTrace:
    """
    Run the annealing loop for ``sched.k_max`` proposals.

    At step ``k`` the temperature is ``temp_fn(T0, 1 - (k+1)/k_max)``; a
    neighbour of the current state is accepted when
    ``acceptance(E(s), E(s_new), T) >= u`` with ``u ~ U(0, 1)``.
    The best state ever visited is tracked alongside the current one.
    """
    if problem.neighbor is None:
        raise ValueError("simulated annealing needs a neighbour generator")
    rng = make_rng(seed)
    if initial is None:
        if problem.sample is None:
            raise ValueError("no initial state and no sampler")
        initial = problem.sample(rng)
    s = initial
    e = e_init = float(problem.energy(s))
    evals = 1
    t0 = sched.initial_temp
    if t0 is None:
        t0 = estimate_initial_temp(problem, rng, sched.temp_samples)
        evals += sched.temp_samples

    k_max = sched.k_max
    best, best_state = e, s
    best_hist = np.empty(k_max)
    cur_hist = np.empty(k_max)
    accepted = 0
    energy, neighbor, temp_fn, accept = problem.energy, problem.neighbor, sched.temp_fn, sched.acceptance
    for k in range(k_max):
        temp = temp_fn(t0, 1.0 - (k + 1) / k_max)
        cand = neighbor(s, rng, temp / t0)
        ec = float(energy(cand))
        if accept(e, ec, temp) >= rng.random():
            s, e = cand, ec
            accepted += 1
            if e < best:
                best, best_state = e, s
        best_hist[k] = best
        cur_hist[k] = e
    return RunTrace(
        best_history=best_hist,
        state=s,
        energy=e,
        best_state=best_state,
        best_energy=best,
        iterations=k_max,
        evaluations=evals + k_max,
        seed=seed,
        current_history=cur_hist,
        accepted=accepted,
        initial_energy=e_init,
    )


def flp_problem(inst: FlpInstance, cfg: ModelConfig) -> BlackBoxProblem:
    """
    The open/close search space as a discrete black-box problem.

    States are tuples of 0/1; the energy is the full objective with the
    transport-optimal assignment for that open set, or ``inf`` when the
    open set is infeasible.  Energies are memoised per state.
    """
    n = inst.n
    cache: dict[tuple[int, ...], float] = {}
    param_problems = [p for t in cfg.extension_terms for p in t.param_problems()]

    def energy(state):
        key = tuple(state)
        if key not in cache:
            res = None if param_problems else assign_for_open_set(inst, cfg, np.array(key))
            cache[key] = math.inf if res is None else evaluate(inst, cfg, np.array(key), res.assign).total
        return cache[key]

    def sample(rng):
        return tuple(int(b) for b in rng.random(n) < 0.5)

    def neighbor(state, rng, heat=1.0):
        i = int(rng.random() * n)
        out = list(state)
        out[i] = 1 - out[i]
        return tuple(out)

    return BlackBoxProblem.discrete(energy, n, sample, neighbor)


def flp_anneal(inst: FlpInstance, cfg: ModelConfig, sched: AnnealSchedule, seed: int, initial=None) -> BnbReport:
    """
    Heuristic FLP solve by annealing over open sets; handles every model term.

    Starts from all facilities open unless ``initial`` is given.  The
    report never claims optimality; ``status`` is ``"feasible"`` or
    ``"no_incumbent"`` when no feasible open set was visited.
    """
    problem = flp_problem(inst, cfg)
    start = tuple(int(b) for b in initial) if initial is not None else (1,) * inst.n
    trace = simulated_annealing(problem, sched, seed, initial=start)
    if not math.isfinite(trace.best_energy):
        return BnbReport("no_incumbent", None, False, trace.evaluations, -math.inf, tuple(trace.best_history))
    x = np.array(trace.best_state)
    res = assign_for_open_set(inst, cfg, x)
    sol = package_solution(inst, cfg, x, res.assign)
    assert not check_feasible(inst, cfg, sol.open, sol.assign)
    return BnbReport("feasible", sol, False, trace.evaluations, -math.inf, tuple(trace.best_history))

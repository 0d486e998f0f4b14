"""
Exact branch-and-bound over the open/close binaries, plus exhaustive enumeration.

Only the linear part of the model (transport + sunken cost with the
capacity band) is handled here.  Configurations carrying an equity weight
or extension terms are refused; use :func:`evsite.metaheuristics.flp_anneal`.
"""

from __future__ import annotations

import heapq
import itertools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .instance import FlpInstance, FlpSolution
from .lp import assign_for_open_set, relax
from .model import ModelConfig, package_solution

__all__ = [
    "BnbConfig",
    "BnbReport",
    "NonlinearModelError",
    "InfeasibleModelError",
    "solve_exact",
    "brute_force",
    "BRUTE_FORCE_MAX_N",
]

BRUTE_FORCE_MAX_N = 20
_INT_TOL = 1e-6


class NonlinearModelError(ValueError):
    """The exact path was asked to handle a nonlinear objective term."""


class InfeasibleModelError(ValueError):
    """No feasible open set exists."""


@dataclass(frozen=True)
class BnbConfig:
    node_limit: int = 100_000
    time_limit: float | None = None  # seconds
    gap_tolerance: float = 1e-9
    branching_rule: str = "most-fractional"

    def __post_init__(self):
        if self.node_limit <= 0 or (self.time_limit is not None and self.time_limit <= 0):
            raise ValueError("limits must be positive")
        if self.gap_tolerance < 0:
            raise ValueError("gap_tolerance must be >= 0")
        if self.branching_rule not in ("most-fractional", "lowest-index"):
            raise ValueError("branching_rule must be 'most-fractional' or 'lowest-index'")


@dataclass(frozen=True, eq=False)
class BnbReport:
    """
    Outcome of an FLP solve.

    ``status`` is one of ``"optimal"``, ``"limit"`` (search stopped early,
    incumbent returned if any), ``"infeasible"``, ``"feasible"`` (heuristic
    result) or ``"no_incumbent"``.
    """

    status: str
    solution: FlpSolution | None
    proven_optimal: bool
    nodes_explored: int
    best_bound: float
    incumbent_history: tuple[float, ...] = field(default=())
    bound_history: tuple[float, ...] = field(default=())


def _require_linear(cfg: ModelConfig) -> None:
    if cfg.equity_weight != 0:
        raise NonlinearModelError("equity: the exact solver needs equity_weight = 0")
    if cfg.extension_terms:
        name = cfg.extension_terms[0].name
        raise NonlinearModelError(f"extension term {name!r}: the exact solver handles the linear model only")


def _open_key(x) -> tuple[int, ...]:
    return tuple(int(i) for i in np.flatnonzero(np.asarray(x) > 0.5))


def _tol(value: float, rel: float) -> float:
    return rel * max(1.0, abs(value)) if math.isfinite(value) else 0.0


def _better(obj, key, best_obj, best_key, tol) -> bool:
    """Strictly better objective, or a tie broken towards the smaller open-index tuple."""
    if obj < best_obj - tol:
        return True
    return obj <= best_obj + tol and key < best_key


def solve_exact(inst: FlpInstance, cfg: ModelConfig, bnb: BnbConfig = BnbConfig()) -> BnbReport:
    """
    Solve the linear FLP to optimality by best-bound-first branch-and-bound.

    Each node fixes some ``x_i`` and solves the LP relaxation with the
    remaining ones in [0, 1].  Integral relaxations update the incumbent;
    otherwise the most fractional ``x_i`` (ties: lowest index) is split.
    Objective ties between incumbents go to the lexicographically smaller
    tuple of open facility indices.

    Raises
    ------
    NonlinearModelError
        If ``cfg`` carries an equity weight or extension terms.
    """
    _require_linear(cfg)
    n = inst.n
    start = time.perf_counter()

    best_obj, best_key, best_sol = math.inf, (math.inf,), None
    inc_hist, bound_hist = [], []
    counter = itertools.count()

    root = relax(inst, cfg, [None] * n)
    if root is None:
        return BnbReport("infeasible", None, False, 1, math.inf, (), ())
    heap = [(root.bound, next(counter), [None] * n, root)]
    nodes = 0
    global_bound = root.bound
    limited = False

    while heap:
        if nodes >= bnb.node_limit or (bnb.time_limit is not None and time.perf_counter() - start > bnb.time_limit):
            limited = True
            break
        bound, _, fixed, rel = heapq.heappop(heap)
        nodes += 1
        # best-first: the popped bound is the global lower bound
        global_bound = max(global_bound, min(bound, best_obj))
        bound_hist.append(global_bound)
        if bound > best_obj + _tol(best_obj, bnb.gap_tolerance):
            inc_hist.append(best_obj)
            continue

        frac = [(i, v) for i, v in enumerate(rel.open) if fixed[i] is None and _INT_TOL < v < 1 - _INT_TOL]
        if not frac:
            x = np.array([1 if v > 0.5 else 0 for v in rel.open])
            res = assign_for_open_set(inst, cfg, x)
            if res is not None:
                obj = float(np.dot(inst.sunken_costs, x)) + res.transport
                key = _open_key(x)
                if _better(obj, key, best_obj, best_key, _tol(best_obj, bnb.gap_tolerance)):
                    best_obj, best_key = obj, key
                    best_sol = package_solution(inst, cfg, x, res.assign)
            inc_hist.append(best_obj)
            continue
        inc_hist.append(best_obj)

        if bnb.branching_rule == "most-fractional":
            i = min(frac, key=lambda t: (abs(t[1] - 0.5), t[0]))[0]
        else:
            i = frac[0][0]
        for val in (1, 0):
            child = list(fixed)
            child[i] = val
            r = relax(inst, cfg, child)
            if r is None:
                continue
            cb = max(r.bound, bound)
            if cb > best_obj + _tol(best_obj, bnb.gap_tolerance):
                continue
            heapq.heappush(heap, (cb, next(counter), child, r))

    if best_sol is None:
        status = "limit" if limited else "infeasible"
        return BnbReport(status, None, False, nodes, global_bound, tuple(inc_hist), tuple(bound_hist))
    final_bound = min(best_obj, heap[0][0]) if (limited and heap) else best_obj
    gap = (best_obj - final_bound) / max(1.0, abs(final_bound))
    proven = (not limited) and gap <= bnb.gap_tolerance
    return BnbReport(
        "optimal" if proven else "limit",
        best_sol,
        proven,
        nodes,
        final_bound,
        tuple(inc_hist),
        tuple(bound_hist),
    )


def brute_force(inst: FlpInstance, cfg: ModelConfig) -> FlpSolution:
    """
    Enumerate every open set and return the cheapest feasible one.

    Ties (within 1e-9 relative) go to the lexicographically smallest tuple
    of open facility indices, so ``{0}`` beats ``{1}``.

    Raises
    ------
    ValueError
        If ``inst.n`` exceeds :data:`BRUTE_FORCE_MAX_N`.
    InfeasibleModelError
        If no open set is feasible.
    NonlinearModelError
        If ``cfg`` is not linear.
    """
    _require_linear(cfg)
    if inst.n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}")
    best_obj, best_key, best = math.inf, (math.inf,), None
    for bits in itertools.product((0, 1), repeat=inst.n):
        x = np.array(bits)
        res = assign_for_open_set(inst, cfg, x)
        if res is None:
            continue
        obj = float(np.dot(inst.sunken_costs, x)) + res.transport
        key = _open_key(x)
        if _better(obj, key, best_obj, best_key, _tol(best_obj, 1e-9)):
            best_obj, best_key, best = obj, key, (x, res.assign)
    if best is None:
        raise InfeasibleModelError("no feasible open set exists")
    return package_solution(inst, cfg, *best)

"""
Rastrigin test function and a cross-solver comparison harness.

Solvers are registered by name; each runner takes
``(problem, budget, seed)`` and returns a :class:`RunTrace`.  The
built-in set is ``sa``, ``ga``, ``pso`` and ``patternsearch``.  Integer
linear programming and surrogate optimisation are not included as
Rastrigin solvers, but a surrogate (or any other) runner can be plugged
in with :func:`register_solver`.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from .metaheuristics import (
    BENCH_PSO,
    AnnealSchedule,
    BlackBoxProblem,
    GaConfig,
    PatternConfig,
    RunTrace,
    genetic_algorithm,
    geometric_cooling,
    particle_swarm,
    pattern_search,
    simulated_annealing,
)
from .spatial import make_rng

__all__ = [
    "rastrigin",
    "RastriginProblem",
    "local_min_value",
    "local_min_lattice",
    "BenchRow",
    "BenchReport",
    "UnknownSolverError",
    "SOLVERS",
    "register_solver",
    "run_bench",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10_000


def rastrigin(x, A: float = 10.0) -> float:
    """``A n + sum(x_i^2 - A cos(2 pi x_i))``; zero only at the origin."""
    x = np.asarray(x, dtype=float).ravel()
    return float(A * x.size + np.sum(x * x - A * np.cos(2.0 * np.pi * x)))


@dataclass(frozen=True)
class RastriginProblem:
    dimension: int = 10
    A: float = 10.0
    bound: float = 5.12

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")

    def __call__(self, x) -> float:
        return rastrigin(x, self.A)

    @property
    def lower(self) -> np.ndarray:
        return np.full(self.dimension, -self.bound)

    @property
    def upper(self) -> np.ndarray:
        return np.full(self.dimension, self.bound)

    def black_box(self, step: float = 0.1) -> BlackBoxProblem:
        return BlackBoxProblem.continuous(self, self.lower, self.upper, step=step)


def local_min_value(m: int, A: float = 10.0) -> float:
    """
    Value of the one-dimensional local minimum of
    ``x^2 - A cos(2 pi x) + A`` nearest the integer ``m``.

    The minimiser lies in ``[|m| - 1/4, |m|]``, where the derivative
    ``2x + 2 pi A sin(2 pi x)`` changes sign; it is found by bisection.
    """
    m = abs(int(m))
    if m == 0:
        return 0.0
    a, b = m - 0.25, float(m)

    def slope(x):
        return 2 * x + 2 * math.pi * A * math.sin(2 * math.pi * x)

    if slope(a) >= 0:
        raise ValueError(f"no local minimum near {m} for A={A}")
    for _ in range(200):
        c = 0.5 * (a + b)
        if slope(c) < 0:
            a = c
        else:
            b = c
    x = 0.5 * (a + b)
    return x * x - A * math.cos(2 * math.pi * x) + A


def local_min_lattice(n: int, max_index: int, A: float = 10.0) -> list[float]:
    """
    All values ``sum_i l(m_i)`` over ``n`` coordinates with ``|m_i| <= max_index``.

    These are the Rastrigin values at the local minima near integer
    lattice points.  Values closer than 1e-6 are merged.
    """
    if max_index < 0 or n < 1:
        raise ValueError("need n >= 1 and max_index >= 0")
    levels = [local_min_value(m, A) for m in range(max_index + 1)]
    sums = [0.0]
    for _ in range(n):
        sums = _dedup(s + lv for s in sums for lv in levels)
    return sums


def _dedup(values: Iterable[float], tol: float = 1e-6) -> list[float]:
    out: list[float] = []
    for v in sorted(values):
        if not out or v - out[-1] > tol:
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# solver registry

Runner = Callable[[RastriginProblem, int, int], RunTrace]


@dataclass(frozen=True)
class _Entry:
    runner: Runner
    label: str


def _run_sa(prob: RastriginProblem, budget: int, seed: int) -> RunTrace:
    # one evaluation for the start state plus the temperature probe
    sched = AnnealSchedule(k_max=max(0, budget - 101), temp_fn=geometric_cooling(1e-5))
    return simulated_annealing(prob.black_box(step=0.1), sched, seed)


def _run_ga(prob: RastriginProblem, budget: int, seed: int) -> RunTrace:
    return genetic_algorithm(prob.black_box(), GaConfig(max_evaluations=budget), seed)


def _run_pso(prob: RastriginProblem, budget: int, seed: int) -> RunTrace:
    return particle_swarm(prob.black_box(), replace(BENCH_PSO, max_evaluations=budget), seed)


def basin_start(prob: RastriginProblem, seed: int, radius: float = 0.25) -> np.ndarray:
    """Random start inside the central basin, ``|x_i| <= radius``."""
    return make_rng(seed).uniform(-radius, radius, size=prob.dimension)


def _run_pattern(prob: RastriginProblem, budget: int, seed: int) -> RunTrace:
    # mesh capped at the start radius so polls never leave the central basin
    cfg = PatternConfig(initial_mesh=0.25, max_mesh=0.25, max_evaluations=budget)
    return pattern_search(prob.black_box(), cfg, basin_start(prob, seed))


SOLVERS: dict[str, _Entry] = {
    "ga": _Entry(_run_ga, "Genetic Algorithm"),
    "patternsearch": _Entry(_run_pattern, "Pattern Search"),
    "pso": _Entry(_run_pso, "Particle Swarm"),
    "sa": _Entry(_run_sa, "Simulated Annealing"),
}


class UnknownSolverError(ValueError):
    pass


def register_solver(name: str, runner: Runner, label: str | None = None) -> None:
    """Add a solver to the registry, e.g. a surrogate-model optimiser."""
    SOLVERS[name] = _Entry(runner, label or name)


# ---------------------------------------------------------------------------
# report


@dataclass(frozen=True, eq=False)
class BenchRow:
    solver: str
    seed: int
    x: np.ndarray
    objective: float
    iterations: int
    wall_ms: float


@dataclass(frozen=True, eq=False)
class BenchReport:
    dimension: int
    rows: tuple[BenchRow, ...]
    notes: tuple[str, ...] = field(default=())

    def aggregates(self) -> dict[str, dict[str, float]]:
        """Median / min / max objective per solver."""
        out = {}
        for name in sorted({r.solver for r in self.rows}):
            vals = np.array([r.objective for r in self.rows if r.solver == name])
            out[name] = {
                "runs": int(vals.size),
                "median": float(np.median(vals)),
                "min": float(vals.min()),
                "max": float(vals.max()),
            }
        return out

    def header(self) -> list[str]:
        return ["solver", "seed"] + [f"x{i + 1}" for i in range(self.dimension)] + ["objective", "iterations", "wall_ms"]

    def to_csv(self, timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header())
        for r in self.rows:
            w.writerow(
                [r.solver, r.seed]
                + [_fmt(v) for v in r.x]
                + [_fmt(r.objective), r.iterations, _fmt(r.wall_ms) if timing else ""]
            )
        return buf.getvalue()

    def to_markdown(self, timing: bool = True) -> str:
        """Per-run table laid out like the solver comparison table, then aggregates."""
        xs = [f"x{i + 1}" for i in range(self.dimension)]
        cols = ["Solver", "Seed"] + xs + ["Objective Value", "Number of Iterations", "Wall ms"]
        lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
        for r in self.rows:
            cells = [_label(r.solver), str(r.seed)] + [_fmt(v) for v in r.x]
            cells += [_fmt(r.objective), str(r.iterations), _fmt(r.wall_ms) if timing else ""]
            lines.append("| " + " | ".join(cells) + " |")
        if self.rows:
            lines += ["", "| Solver | Runs | Median | Min | Max |", "|---|---|---|---|---|"]
            for name, a in self.aggregates().items():
                lines.append(
                    f"| {_label(name)} | {a['runs']} | {_fmt(a['median'])} | {_fmt(a['min'])} | {_fmt(a['max'])} |"
                )
            if self.notes:
                lines.append("")
                lines += [f"- {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


def _fmt(v: float) -> str:
    return repr(float(v))


def _label(name: str) -> str:
    entry = SOLVERS.get(name)
    return entry.label if entry else name


OMITTED = (
    "Integer linear programming is not run: an ILP solver is not a meaningful Rastrigin minimiser.",
    "Surrogate optimisation is not bundled; plug one in with register_solver().",
    "Iteration counts are energy evaluations.",
)


def run_bench(
    solvers: Sequence[str],
    n: int = 10,
    budget: int = DEFAULT_BUDGET,
    seeds: Sequence[int] = tuple(range(30)),
) -> BenchReport:
    """
    Run every solver on an ``n``-dimensional Rastrigin problem for every seed.

    Rows are sorted by solver name then seed.  Every row's objective is
    the Rastrigin value of its reported point.

    Raises
    ------
    UnknownSolverError
        If a solver name is not registered.
    """
    if not solvers:
        raise ValueError("need at least one solver")
    unknown = [s for s in solvers if s not in SOLVERS]
    if unknown:
        raise UnknownSolverError(f"unknown solver(s): {', '.join(unknown)}; known: {', '.join(sorted(SOLVERS))}")
    prob = RastriginProblem(n)
    rows = []
    for name in sorted(set(solvers)):
        runner = SOLVERS[name].runner
        for seed in sorted(set(int(s) for s in seeds)):
            t0 = time.perf_counter()
            trace = runner(prob, budget, seed)
            wall = 1000 * (time.perf_counter() - t0)
            x = np.array(trace.best_state, dtype=float)
            rows.append(BenchRow(name, seed, x, prob(x), int(trace.evaluations), wall))
    return BenchReport(n, tuple(rows), OMITTED)

"""
Acceptance gate.

Each test checks one criterion at its stated tolerance and records a
one-line verdict; ``conftest.pytest_terminal_summary`` prints them after
the run.  ``python3 tests/test_acceptance.py`` runs only this file.
"""

import filecmp
import math
import time

import numpy as np
import pytest

from evsite.bnb import brute_force, solve_exact
from evsite.cli import main
from evsite.lp import lp_bound
from evsite.metaheuristics import AnnealSchedule, flp_anneal
from evsite.model import ModelConfig, equity_penalty, gini
from evsite.rastrigin import local_min_lattice, local_min_value, rastrigin, run_bench
from evsite.tsp import random_tsp_instance, tsp_anneal, tsp_brute_force

from cli_recipes import recipes
from conftest import small_instance

FULL = ModelConfig("full", 0.0)


def _oracle_instances():
    """200 seeded instances with 1..6 facilities and 1..8 customers."""
    return [small_instance(s, n=1 + s % 6, m=1 + (s // 6) % 8) for s in range(200)]


@pytest.fixture(scope="module")
def oracle_runs():
    t0 = time.perf_counter()
    runs = []
    for inst in _oracle_instances():
        exact = solve_exact(inst, FULL)
        ref = brute_force(inst, FULL)
        runs.append((inst, exact, ref))
    return runs, time.perf_counter() - t0


def test_exact_matches_brute_force(oracle_runs, verdict):
    runs, elapsed = oracle_runs
    ok = sum(
        r.status == "optimal" and math.isclose(r.solution.objective_total, ref.objective_total, rel_tol=1e-9, abs_tol=1e-9)
        for _, r, ref in runs
    )
    passed = ok == 200 and elapsed < 60
    verdict("exact solver equals brute force", passed, f"{ok}/200 within 1e-9 rel, {elapsed:.1f} s (< 60 s)")
    assert passed


def test_lp_bound_is_sound(oracle_runs, verdict):
    runs, _ = oracle_runs
    ok = 0
    for inst, _, ref in runs:
        bound = lp_bound(inst, FULL, [None] * inst.n)
        ok += bound <= ref.objective_total + 1e-9 * max(1.0, abs(ref.objective_total))
    verdict("LP bound below integer optimum", ok == 200, f"{ok}/200")
    assert ok == 200


def test_rastrigin_values(verdict):
    f0 = rastrigin(np.zeros(10))
    e1 = np.zeros(10)
    e1[0] = 1.0
    f1 = rastrigin(e1)
    l2 = local_min_value(2)
    lat = local_min_lattice(1, 2)
    in_lattice = any(abs(v - l2) < 1e-12 for v in lat)
    passed = f0 == 0.0 and abs(f1 - 1.0) <= 1e-12 and abs(l2 - 3.9798) <= 5e-4 and in_lattice
    verdict("Rastrigin analytic values", passed, f"f(0)={f0!r}, f(e1)={f1!r}, l(2)={l2:.6f}")
    assert passed


def test_bench_distribution(verdict):
    t0 = time.perf_counter()
    rep = run_bench(["sa", "ga", "pso", "patternsearch"], n=10, budget=10_000, seeds=range(30))
    elapsed = time.perf_counter() - t0
    by = {s: np.array([r.objective for r in rep.rows if r.solver == s]) for s in ("sa", "ga", "pso", "patternsearch")}
    evals_ok = all(r.iterations <= 10_000 for r in rep.rows)
    lattice = np.array(local_min_lattice(10, 3))
    sa_near = float(np.mean([np.min(np.abs(lattice - v)) <= 0.1 for v in by["sa"]]))
    checks = {
        "pattern max": (by["patternsearch"].max(), by["patternsearch"].max() <= 1e-8),
        "pso median": (np.median(by["pso"]), np.median(by["pso"]) <= 1e-6),
        "ga median": (np.median(by["ga"]), np.median(by["ga"]) <= 5.0),
        "sa near lattice": (sa_near, sa_near >= 0.8),
    }
    passed = evals_ok and elapsed < 300 and all(ok for _, ok in checks.values())
    detail = ", ".join(f"{k}={v:.3g}" for k, (v, _) in checks.items()) + f", {elapsed:.0f} s"
    verdict("benchmark distribution (n=10, 30 seeds)", passed, detail)
    assert passed


def test_tsp_oracle(verdict):
    t0 = time.perf_counter()
    within = 0
    for s in range(50):
        inst = random_tsp_instance(4 + s % 6, s)
        sched = AnnealSchedule(k_max=100_000 - 1 - 100)
        tour, trace = tsp_anneal(inst, sched, seed=s)
        assert trace.evaluations <= 100_000
        within += tour.length <= 1.05 * tsp_brute_force(inst).length
    elapsed = time.perf_counter() - t0
    passed = within >= 45 and elapsed < 120
    verdict("TSP anneal within 5% of brute force", passed, f"{within}/50 seeds, {elapsed:.1f} s (< 120 s)")
    assert passed


def test_tsp_convergence(verdict):
    inst = random_tsp_instance(50, 0)
    halved = monotone = 0
    for s in range(30):
        _, trace = tsp_anneal(inst, AnnealSchedule(k_max=15_000), seed=s)
        monotone += bool(np.all(np.diff(trace.best_history) <= 0))
        halved += trace.best_energy <= 0.5 * trace.initial_energy
    passed = monotone == 30 and halved >= 27
    verdict("TSP convergence (n=50)", passed, f"non-increasing {monotone}/30, final <= 50% of initial {halved}/30")
    assert passed


def test_gini_exact_and_invariant(verdict):
    exact = gini([1, 1, 1, 1]) == 0.0 and gini([0, 1]) == 0.5 and gini([0, 0, 0, 1]) == 0.75
    rng = np.random.default_rng(2024)
    scale_ok = perm_ok = 0
    for _ in range(10_000):
        v = rng.exponential(size=int(rng.integers(1, 30)))
        v[rng.random(v.size) < 0.2] = 0.0
        g = gini(v)
        scale_ok += math.isclose(gini(v * rng.uniform(1e-3, 1e3)), g, rel_tol=1e-9, abs_tol=1e-12)
        perm_ok += math.isclose(gini(rng.permutation(v)), g, rel_tol=1e-9, abs_tol=1e-12)
    passed = exact and scale_ok == 10_000 and perm_ok == 10_000
    verdict("Gini exact values and invariances", passed, f"exact={exact}, scale {scale_ok}/10000, permutation {perm_ok}/10000")
    assert passed


def test_cli_determinism(tmp_path, verdict, capsys):
    dirs = [tmp_path / "a", tmp_path / "b"]
    for d in dirs:
        d.mkdir()
        for argv, code in recipes(d):
            assert main(argv) == code, argv
    capsys.readouterr()
    names = sorted(p.name for p in dirs[0].iterdir())
    assert names == sorted(p.name for p in dirs[1].iterdir())
    _, mismatch, errors = filecmp.cmpfiles(dirs[0], dirs[1], names, shallow=False)
    passed = bool(names) and not mismatch and not errors
    verdict("CLI output byte-identical on rerun", passed, f"{len(names)} files, {len(mismatch)} differ")
    assert passed


def test_equity_effect(verdict):
    # default (full-service) model: every customer's fulfillment is 1
    sched = AnnealSchedule(k_max=300)
    worse = 0
    for s in range(20):
        inst = small_instance(100 + s, n=5, m=8)
        lo = flp_anneal(inst, ModelConfig("full", 0.0), sched, seed=s)
        hi = flp_anneal(inst, ModelConfig("full", 1e4), sched, seed=s)
        assert lo.status == hi.status == "feasible"
        worse += equity_penalty(inst, hi.solution.assign) > equity_penalty(inst, lo.solution.assign)
    verdict("equity weight never raises Gini", worse == 0, f"{worse}/20 paired runs got worse")
    assert worse == 0


if __name__ == "__main__":
    import sys
    from pathlib import Path

    sys.exit(pytest.main([str(Path(__file__)), "-q"]))

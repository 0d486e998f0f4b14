import csv
import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from evsite.metaheuristics import RunTrace
from evsite.rastrigin import (
    SOLVERS,
    BenchReport,
    RastriginProblem,
    UnknownSolverError,
    local_min_lattice,
    local_min_value,
    rastrigin,
    register_solver,
    run_bench,
)


def test_analytic_values():
    assert rastrigin(np.zeros(10)) == 0.0
    e1 = np.zeros(10)
    e1[0] = 1.0
    assert rastrigin(e1) == pytest.approx(1.0, abs=1e-12)
    assert rastrigin([0.5]) == pytest.approx(20.25)


@given(st.lists(st.floats(-5.12, 5.12), min_size=1, max_size=12))
def test_rastrigin_nonnegative_and_symmetric(x):
    x = np.array(x)
    assert rastrigin(x) >= -1e-9
    assert rastrigin(-x) == pytest.approx(rastrigin(x), abs=1e-9)
    assert rastrigin(x[::-1]) == pytest.approx(rastrigin(x), abs=1e-9)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_local_min_value_matches_numeric_minimiser(m):
    ref = minimize_scalar(lambda t: rastrigin([t]), bounds=(m - 0.5, m + 0.5), method="bounded", options={"xatol": 1e-12})
    assert local_min_value(m) == pytest.approx(ref.fun, abs=1e-9)
    assert local_min_value(-m) == local_min_value(m)


def test_local_min_value_l2():
    assert local_min_value(2) == pytest.approx(3.9798, abs=5e-4)
    assert local_min_value(0) == 0.0


def test_lattice_contents():
    lat = local_min_lattice(2, 1)
    l1 = local_min_value(1)
    np.testing.assert_allclose(lat, [0.0, l1, 2 * l1])
    big = local_min_lattice(10, 3)
    assert big[0] == 0.0 and np.all(np.diff(big) > 1e-6)
    assert min(abs(v - local_min_value(2)) for v in big) < 1e-9


def test_problem_bounds():
    p = RastriginProblem(3)
    np.testing.assert_array_equal(p.upper, [5.12] * 3)
    assert p.black_box().dimension == 3
    with pytest.raises(ValueError):
        RastriginProblem(0)


def test_bench_report_formats_share_numbers():
    rep = run_bench(["sa", "ga", "pso", "patternsearch"], n=3, budget=400, seeds=[0, 1])
    assert [(r.solver, r.seed) for r in rep.rows] == [
        (s, k) for s in ("ga", "patternsearch", "pso", "sa") for k in (0, 1)
    ]
    rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
    md = rep.to_markdown()
    for r, row in zip(rep.rows, rows):
        assert float(row["objective"]) == r.objective
        assert row["objective"] in md
        assert rastrigin(r.x) == r.objective
        assert r.iterations <= 400
    assert rep.to_csv(timing=False).splitlines()[1].endswith(",")


def test_bench_deterministic_without_timing():
    a = run_bench(["pso", "sa"], n=2, budget=300, seeds=[3])
    b = run_bench(["pso", "sa"], n=2, budget=300, seeds=[3])
    assert a.to_csv(timing=False) == b.to_csv(timing=False)
    assert a.to_markdown(timing=False) == b.to_markdown(timing=False)


def test_empty_seed_list_gives_header_only():
    rep = run_bench(["sa"], n=4, seeds=[])
    assert rep.to_csv().splitlines() == ["solver,seed,x1,x2,x3,x4,objective,iterations,wall_ms"]
    assert len(rep.to_markdown().splitlines()) == 2


def test_unknown_solver():
    with pytest.raises(UnknownSolverError, match="nope"):
        run_bench(["nope"], seeds=[0])


def test_register_solver_plugs_in_runner():
    def runner(prob, budget, seed):
        x = np.zeros(prob.dimension)
        return RunTrace(np.zeros(1), x, 0.0, x, 0.0, 1, 1, seed)

    register_solver("zero", runner, "Oracle")
    try:
        rep = run_bench(["zero"], n=2, seeds=[0])
        assert rep.rows[0].objective == 0.0
        assert "| Oracle |" in rep.to_markdown()
    finally:
        SOLVERS.pop("zero")


def test_markdown_notes_list_omitted_solvers():
    md = run_bench(["ga"], n=2, budget=100, seeds=[0]).to_markdown()
    assert "Integer linear programming" in md and "register_solver" in md

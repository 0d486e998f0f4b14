import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from evsite.model import (
    ModelConfig,
    check_feasible,
    equity_penalty,
    evaluate,
    gini,
    make_extension,
    max_distance_term,
    package_solution,
)

nonneg = st.lists(st.floats(0, 1e6, allow_nan=False), min_size=1, max_size=30)


def gini_pairwise(v):
    """Mean absolute difference over all ordered pairs divided by twice the mean."""
    v = [float(a) for a in v]
    k, total = len(v), sum(v)
    if total == 0:
        return 0.0
    return sum(abs(a - b) for a, b in itertools.product(v, v)) / (2 * k * total)


def test_gini_exact_values():
    assert gini([1, 1, 1, 1]) == 0.0
    assert gini([0, 1]) == 0.5
    assert gini([0, 0, 0, 1]) == 0.75
    assert gini([0, 0]) == 0.0


@given(nonneg)
def test_gini_matches_pairwise_oracle(v):
    assert gini(v) == pytest.approx(gini_pairwise(v), rel=1e-9, abs=1e-12)


@given(nonneg)
def test_gini_range(v):
    g = gini(v)
    assert 0.0 <= g <= 1.0 - 1.0 / len(v) + 1e-12


@pytest.mark.parametrize("bad", [[], [-1.0, 2.0], [np.nan]])
def test_gini_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        gini(bad)


def test_evaluate_breakdown(tiny):
    x = np.array([1, 1])
    y = np.array([[0, 0, 1.0], [1.0, 1.0, 0]])
    b = evaluate(tiny, ModelConfig(), x, y)
    # transport: 4*1 from site 0 to customer 2; 2*1 + 3*1 from site 1
    assert b.transport == pytest.approx(4.0 + 2.0 + 3.0)
    assert b.sunken == 6.0
    assert b.total == pytest.approx(15.0)
    assert sum(b.terms().values()) == pytest.approx(b.total)


def test_equity_term_weighted(tiny):
    x = np.array([1, 1])
    y = np.array([[0, 0, 0.5], [1.0, 0.0, 0]])
    cfg = ModelConfig("partial", equity_weight=10.0)
    b = evaluate(tiny, cfg, x, y)
    assert b.equity == pytest.approx(gini([1.0, 0.0, 0.5]))
    assert b.terms()["equity"] == pytest.approx(10 * b.equity)
    assert equity_penalty(tiny, y) == b.equity


def test_max_distance_term(tiny):
    term = max_distance_term(weight=2.0, threshold=1.0)
    x = np.array([1, 0])
    y = np.array([[1.0, 1.0, 1.0], [0, 0, 0]])
    over = np.maximum(0, tiny.distances[0] - 1.0).sum()
    assert term(tiny, x, y) == pytest.approx(2.0 * over)
    assert not ModelConfig(extension_terms=(term,)).is_linear
    assert make_extension("max_distance", "m", {"weight": 2.0, "threshold": 1.0}) == max_distance_term(2.0, 1.0, "m")
    with pytest.raises(ValueError):
        make_extension("nope", "m", {})


def test_check_feasible_reports_each_violation(tiny):
    cfg = ModelConfig()
    x = np.array([1, 0])
    y = np.array([[1.0, 0.5, 1.0], [0, 0.5, 0]])
    problems = check_feasible(tiny, cfg, x, y)
    assert "assign[1,1]: exceeds open[1]" in problems
    assert check_feasible(tiny, cfg, [1, 1], [[0, 0, 1.0], [1.0, 1.0, 0]]) == []
    under = check_feasible(tiny, cfg, [1, 1], [[0, 0, 1.0], [1.0, 0.5, 0]])
    assert any("customer 1" in p for p in under)
    assert check_feasible(tiny, ModelConfig("partial"), [1, 1], [[0, 0, 1.0], [1.0, 0.5, 0]]) == []


def test_capacity_band(tiny):
    inst = tiny.with_model(min_capacity=5.0)
    # site 0 serves only customer 2 (4 kWh) < C_min
    problems = check_feasible(inst, ModelConfig(), [1, 1], [[0, 0, 1.0], [1.0, 1.0, 0]])
    assert any("below C_min" in p for p in problems)
    small = tiny.with_model()
    over = check_feasible(small, ModelConfig(), [1, 0], [[1.0, 1.0, 1.0], [0, 0, 0]])
    assert over == []


def test_evaluate_rejects_bad_shapes(tiny):
    with pytest.raises(ValueError):
        evaluate(tiny, ModelConfig(), [1], np.zeros((2, 3)))
    with pytest.raises(ValueError):
        evaluate(tiny, ModelConfig(), [1, 0.5], np.zeros((2, 3)))


def test_package_solution_zeroes_closed_rows(tiny):
    sol = package_solution(tiny, ModelConfig(), [1, 0], [[1.0, 1.0, 1.0], [1e-12, 0, 0]])
    assert sol.assign[1].sum() == 0
    assert sol.problems(full_service=True) == []
    assert sol.objective_total == pytest.approx(sum(sol.objective_terms.values()))


def test_model_config_validation():
    with pytest.raises(ValueError):
        ModelConfig("sometimes")
    with pytest.raises(ValueError):
        ModelConfig(equity_weight=-1)

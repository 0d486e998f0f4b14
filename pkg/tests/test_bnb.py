import itertools

import numpy as np
import pytest

from evsite.bnb import BnbConfig, InfeasibleModelError, NonlinearModelError, brute_force, solve_exact
from evsite.instance import FlpInstance
from evsite.model import ModelConfig, check_feasible, max_distance_term
from conftest import small_instance
from test_lp import flp_scipy_bound


def enumerate_with_scipy(inst, full=True):
    best = np.inf
    for bits in itertools.product((0, 1), repeat=inst.n):
        best = min(best, flp_scipy_bound(inst, full, list(bits)))
    return best


@pytest.mark.parametrize("seed", range(12))
def test_exact_matches_independent_enumeration(seed):
    inst = small_instance(100 + seed, n=4, m=5, min_capacity=15.0 if seed % 4 == 0 else 0.0)
    full = seed % 2 == 0
    rep = solve_exact(inst, ModelConfig("full" if full else "partial"))
    ref = enumerate_with_scipy(inst, full)
    if np.isinf(ref):
        assert rep.status == "infeasible" and rep.solution is None
        return
    assert rep.status == "optimal" and rep.proven_optimal
    assert rep.solution.objective_total == pytest.approx(ref, rel=1e-9)
    cfg = ModelConfig("full" if full else "partial")
    assert check_feasible(inst, cfg, rep.solution.open, rep.solution.assign) == []


@pytest.mark.parametrize("rule", ["most-fractional", "lowest-index"])
def test_branching_rules_agree(rule):
    for seed in range(10):
        inst = small_instance(seed, n=5, m=7)
        a = solve_exact(inst, ModelConfig(), BnbConfig(branching_rule=rule))
        b = brute_force(inst, ModelConfig())
        assert a.solution.objective_total == pytest.approx(b.objective_total, rel=1e-9)


def test_tie_goes_to_lowest_index_open_set():
    inst = FlpInstance.from_arrays(
        facility_xy=[[0.0, 0.0], [0.0, 0.0]],
        customer_xy=[[1.0, 0.0]],
        sunken_cost=[1.0, 1.0],
        capacity=[5.0, 5.0],
        demand=[1.0],
        variable_cost=np.ones((2, 1)),
    )
    assert solve_exact(inst, ModelConfig()).solution.open_indices == (0,)
    assert brute_force(inst, ModelConfig()).open_indices == (0,)


def test_bound_and_incumbent_histories():
    inst = small_instance(5, n=6, m=10)
    rep = solve_exact(inst, ModelConfig())
    inc = np.array(rep.incumbent_history)
    assert np.all(np.diff(inc) <= 1e-12)
    assert rep.best_bound <= rep.solution.objective_total + 1e-9 * abs(rep.solution.objective_total)


def test_node_limit_reports_limit_status():
    inst = small_instance(10, n=8, m=12)  # needs 3 nodes
    assert solve_exact(inst, ModelConfig()).nodes_explored > 1
    rep = solve_exact(inst, ModelConfig(), BnbConfig(node_limit=1))
    assert rep.status in ("limit", "no_incumbent")
    assert not rep.proven_optimal
    if rep.solution is not None:
        assert rep.best_bound <= rep.solution.objective_total + 1e-9


def test_nonlinear_terms_rejected():
    inst = small_instance(1)
    with pytest.raises(NonlinearModelError, match="equity"):
        solve_exact(inst, ModelConfig(equity_weight=1.0))
    with pytest.raises(NonlinearModelError, match="max_distance"):
        solve_exact(inst, ModelConfig(extension_terms=(max_distance_term(1.0, 10.0),)))


def test_infeasible_model():
    inst = FlpInstance.from_arrays([[0, 0]], [[1, 0], [2, 0]], 1.0, 3.0, [2.0, 2.0], 1.0)
    rep = solve_exact(inst, ModelConfig())
    assert rep.status == "infeasible" and rep.solution is None
    with pytest.raises(InfeasibleModelError):
        brute_force(inst, ModelConfig())


def test_brute_force_size_limit():
    inst = small_instance(0, n=21, m=3)
    with pytest.raises(ValueError):
        brute_force(inst, ModelConfig())


def test_bnb_config_validation():
    with pytest.raises(ValueError):
        BnbConfig(node_limit=0)
    with pytest.raises(ValueError):
        BnbConfig(branching_rule="random")

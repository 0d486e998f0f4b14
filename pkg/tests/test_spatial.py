import numpy as np
import pytest

from evsite.files import dumps, instance_to_dict
from evsite.instance import Region, validate
from evsite.spatial import (
    PRNG_NAME,
    CostRanges,
    GenConfig,
    GenerationError,
    fixed,
    generate_instance,
    make_rng,
    poisson,
    sample_ppp,
)


def test_prng_identity():
    assert PRNG_NAME == "numpy.random.PCG64"
    assert isinstance(make_rng(0).bit_generator, np.random.PCG64)


def test_default_instance_size_and_validity():
    inst = generate_instance(GenConfig(seed=7))
    assert (inst.n, inst.m) == (20, 40)
    assert validate(inst) == []
    assert inst.capacities.sum() >= inst.demands.sum()


def test_same_seed_same_instance_different_seed_differs():
    a = dumps(instance_to_dict(generate_instance(GenConfig(seed=11))))
    b = dumps(instance_to_dict(generate_instance(GenConfig(seed=11))))
    c = dumps(instance_to_dict(generate_instance(GenConfig(seed=12))))
    assert a == b != c


def test_points_inside_region_and_cost_ranges():
    region = Region(-5, 5, 10, 12)
    rng = CostRanges(sunken_cost=(1, 2), capacity=(50, 60), rate=(0.1, 0.2), demand=(1, 3))
    inst = generate_instance(GenConfig(region=region, seed=2, cost_ranges=rng))
    assert all(region.contains(f.location) for f in inst.facilities)
    assert all(region.contains(c.location) for c in inst.customers)
    assert np.all((inst.sunken_costs >= 1) & (inst.sunken_costs <= 2))
    assert np.all((inst.cost_rates >= 0.1) & (inst.cost_rates <= 0.2))
    assert np.all((inst.demands >= 1) & (inst.demands <= 3))


def test_poisson_count_mean_matches_intensity():
    # E[N] = intensity * area = 50; mean over 400 draws has sd ~0.35
    region = Region(0, 10, 0, 5)
    rng = make_rng(123)
    counts = [len(sample_ppp(region, poisson(1.0), rng)) for _ in range(400)]
    assert abs(np.mean(counts) - 50) < 2.0


def test_uniformity_of_fixed_count_sample():
    pts = np.array([tuple(p) for p in sample_ppp(Region(0, 1, 0, 1), fixed(20000), make_rng(5))])
    hist, _ = np.histogram(pts[:, 0], bins=10, range=(0, 1))
    # chi-square with 9 dof; 27.9 is the 0.999 quantile
    chi2 = ((hist - 2000) ** 2 / 2000).sum()
    assert chi2 < 27.9


def test_capacity_shortfall_is_rejected_by_name():
    cfg = GenConfig(facilities=fixed(2), customers=fixed(30), cost_ranges=CostRanges(capacity=(5, 10)))
    with pytest.raises(GenerationError, match="capacity"):
        generate_instance(cfg)


def test_partial_mode_allows_shortfall():
    cfg = GenConfig(facilities=fixed(2), customers=fixed(30), cost_ranges=CostRanges(capacity=(5, 10)), full_service=False)
    inst = generate_instance(cfg)
    assert inst.capacities.sum() < inst.demands.sum()


def test_min_capacity_above_capacity_range_rejected():
    with pytest.raises(GenerationError, match="min_capacity"):
        generate_instance(GenConfig(min_capacity=45.0))


def test_zero_count_rejected():
    with pytest.raises((GenerationError, ValueError)):
        generate_instance(GenConfig(facilities=fixed(0)))


def test_seed_out_of_range():
    with pytest.raises(ValueError):
        make_rng(-1)

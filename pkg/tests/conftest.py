import numpy as np
import pytest
from hypothesis import settings

from evsite.spatial import GenConfig, fixed, generate_instance

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


def small_instance(seed, n=4, m=6, **kw):
    return generate_instance(GenConfig(facilities=fixed(n), customers=fixed(m), seed=seed, **kw))


@pytest.fixture
def tiny():
    """Two sites, three customers; site 0 is cheap to open but far away."""
    from evsite.instance import FlpInstance

    return FlpInstance.from_arrays(
        facility_xy=[[0.0, 0.0], [10.0, 0.0]],
        customer_xy=[[9.0, 0.0], [10.0, 1.0], [1.0, 0.0]],
        sunken_cost=[1.0, 5.0],
        capacity=[30.0, 30.0],
        demand=[2.0, 3.0, 4.0],
        variable_cost=np.ones((2, 3)),
    )


_VERDICTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def verdict():
    """Record one acceptance line: ``verdict(name, passed, detail)``."""

    def record(name, passed, detail=""):
        _VERDICTS.append((name, bool(passed), detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance")
    for name, passed, detail in _VERDICTS:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")

import time
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pointed8 import cohomology, morita
from pointed8.doubles import double_census
from pointed8.exactlinalg import verified_decompositions
from pointed8.morita import morita_partition
from pointed8.orbits import equivalence_census

settings.register_profile("exact", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("exact")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def pipeline():
    """The full classification, computed once from an empty memo with every
    Smith decomposition re-multiplied against its input."""
    cohomology.clear_memo()
    morita._h3_solver.cache_clear()
    t0 = time.perf_counter()
    with verified_decompositions() as stats:
        census = equivalence_census()
        partition = morita_partition(census)
        doubles = double_census(partition)
    return SimpleNamespace(census=census, partition=partition, doubles=doubles,
                           snf_checked=stats["checked"], seconds=time.perf_counter() - t0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

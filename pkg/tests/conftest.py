import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from relayplace import Point, Scenario, generate_scenario

settings.register_profile(
    "repo",
    max_examples=int(os.environ.get("HYPOTHESIS_MAX_EXAMPLES", "60")),
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("repo")


def make_scenario(points, r=10.0, R=20.0, sink=(50.0, 50.0), field=(100.0, 100.0)):
    return Scenario(field[0], field[1], tuple(Point(*p) for p in points), Point(*sink), r, R)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def small_scenarios():
    """Random instances small enough for the exact oracle."""
    return [generate_scenario(n, seed=1000 * n + k) for n in range(1, 11) for k in range(8)]


_CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion():
    """``criterion(k, ok, detail)`` records one verdict line and asserts ``ok``."""

    def record(k: int, ok: bool, detail: str) -> None:
        line = f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _CRITERIA[k] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[k])

import numpy as np
import pytest
from hypothesis import settings

# fixed example streams keep every run reproducible
settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")

from margulis_lab import HolonomySpec, build_holonomy


@pytest.fixture(scope="session")
def holonomies():
    return {b: build_holonomy(HolonomySpec.symmetric(b)) for b in (3, 4, 5)}


@pytest.fixture(scope="session")
def hol3(holonomies):
    return holonomies[3]


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one summary line per acceptance criterion; ``report(n, passed, detail)``."""

    def report(n: int, passed: bool, detail: str) -> bool:
        line = f"criterion {n:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[n] = line
        print(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])

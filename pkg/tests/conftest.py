from __future__ import annotations

import pytest
from hypothesis import settings

from abcoupling import CavityGeometry, ModeIndex, solve_mode

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def hard_wall() -> CavityGeometry:
    return CavityGeometry.from_nm(100.0, 100.0)


@pytest.fixture(scope="session")
def finite_u() -> CavityGeometry:
    return CavityGeometry.from_nm(100.0, 100.0, 1e-3)


@pytest.fixture(scope="session")
def solved():
    cache = {}

    def get(geometry: CavityGeometry, n: int, l: int, m: int = 1):
        key = (geometry, n, l, m)
        if key not in cache:
            mode = ModeIndex(n, l, m)
            cache[key] = (mode, solve_mode(geometry, mode))
        return cache[key]

    return get


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

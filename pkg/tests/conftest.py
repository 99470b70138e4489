from __future__ import annotations

import pytest

from sagasolve.fixtures import FIXTURES, load_fixture
from sagasolve.specialize import SpecializedGame, checked_specialize


@pytest.fixture(scope="session")
def games() -> dict[str, SpecializedGame]:
    return {name: checked_specialize(load_fixture(name)) for name in FIXTURES}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qwratchet import InitialSpec, new_state  # noqa: E402


@pytest.fixture
def symmetric0():
    return InitialSpec()


@pytest.fixture
def fresh_state():
    return new_state(InitialSpec(), 5)


SQRT_HALF = 1 / math.sqrt(2)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

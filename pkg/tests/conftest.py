import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from onlineseg.model import ModelState  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def state_from(rows, step=0):
    return ModelState(np.array(rows, dtype=np.int64).reshape(-1, 2), step)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

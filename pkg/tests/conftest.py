import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tensioncurv import shapes  # noqa: E402

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ico3():
    return shapes.icosphere(3)


@pytest.fixture(scope="session")
def torus64():
    return shapes.torus(64, 32, radius=2.0, tube_radius=0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

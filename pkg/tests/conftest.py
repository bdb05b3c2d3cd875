import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from spatial_stirap.numerics import SpatialGrid  # noqa: E402


@pytest.fixture
def grid():
    return SpatialGrid(2048, -24.0, 24.0)


@pytest.fixture
def small_grid():
    return SpatialGrid(1024, -20.0, 20.0)


def l2_distance(a, b, dx):
    return float(np.sqrt(np.sum((a - b) ** 2) * dx))


ACCEPTANCE_LINES = []


def record_criterion(label, passed, details):
    """Remember a one-line verdict for the terminal summary and echo it."""
    line = f"{label}: {'PASS' if passed else 'FAIL'}  {details}"
    ACCEPTANCE_LINES.append(line)
    print(line, flush=True)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

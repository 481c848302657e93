import random

import pytest

from ipenc.zqlinalg import ZqMatrix


@pytest.fixture
def rng():
    return random.Random(20240611)


def mat(rows, q):
    return ZqMatrix.from_rows(rows, q)


def j_minus_i(n, q):
    return ZqMatrix.from_rows([[int(i != j) for j in range(n)] for i in range(n)], q)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])

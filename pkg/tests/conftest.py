from functools import lru_cache

import numpy as np
import pytest

from quasirandom.groups import construct_family

ACCEPTANCE_LINES = []


@lru_cache(maxsize=None)
def group(family, *params):
    return construct_family(family, *params)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import numpy as np
import pytest

from helpers import ACCEPTANCE, sim_data


@pytest.fixture
def rng():
    return np.random.default_rng(20211015)


@pytest.fixture
def small_data():
    return sim_data(20, 50, snr=2.0, seed=3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)

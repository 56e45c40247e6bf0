import numpy as np
import pytest

from apso_sensing import build_scenario, reference_scenario


@pytest.fixture
def paper_scenario():
    return reference_scenario()


@pytest.fixture
def single_sensor():
    # N=20, unit variances, 0 dB: a = 41, b = 121
    return build_scenario([0.0], 20, [1.0], [1.0], 0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import numpy as np
import pytest

from slabsqueeze.constants import HBAR_EV_S
from slabsqueeze.dielectric import DielectricResponse, FrequencyGrid
from slabsqueeze.synthetic import single_crossover_table

L25 = 25e-6
MU = 1.49


def omega(energy):
    return energy / HBAR_EV_S


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def gain_table():
    return single_crossover_table(mu=MU)


@pytest.fixture(scope="session")
def crossover_grid():
    # odd count centred on mu so one sample sits on the crossover
    return FrequencyGrid(np.linspace(MU - 0.001, MU + 0.001, 2001))


@pytest.fixture(scope="session")
def crossover_response(gain_table, crossover_grid):
    return DielectricResponse.tabulated(gain_table, crossover_grid)


ACCEPTANCE = []  # (criterion, passed, detail), filled by test_acceptance


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {number:2d}: {detail}")

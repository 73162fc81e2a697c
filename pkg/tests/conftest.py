import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tauber_lab.arithfun import constant_one, sieve_von_mangoldt  # noqa: E402
from tauber_lab.fixtures import single_jump, von_mangoldt_rho  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def lam_small():
    return sieve_von_mangoldt(10**4)


@pytest.fixture(scope="session")
def lam_1e6():
    return sieve_von_mangoldt(10**6)


@pytest.fixture(scope="session")
def one_1e6():
    return constant_one(10**6)


@pytest.fixture(scope="session")
def rho_jump():
    return single_jump(1.0)


@pytest.fixture(scope="session")
def rho_lam():
    return von_mangoldt_rho(10**4, 2.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

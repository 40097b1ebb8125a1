import pytest

from semifield_lab.bh_core import BHParams
from semifield_lab.ff_tower import make_field


@pytest.fixture(scope="session")
def f36():
    return make_field(3, 1, 3)


@pytest.fixture(scope="session")
def f38():
    return make_field(3, 1, 4)


@pytest.fixture(scope="session")
def f58():
    return make_field(5, 1, 4)


@pytest.fixture(scope="session")
def bh332(f36):
    return BHParams.canonical(f36, 2)


@pytest.fixture(scope="session")
def bh334(f36):
    return BHParams.canonical(f36, 4)


@pytest.fixture(scope="session")
def bh341(f38):
    return BHParams.canonical(f38, 1)


@pytest.fixture(scope="session")
def bh343(f38):
    return BHParams.canonical(f38, 3)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

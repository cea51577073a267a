import pytest

from enriques_cone.lattice import make_standard
from enriques_cone.vinberg import vinberg_roots

E10_CONTROLLER = (1,) + (0,) * 9


@pytest.fixture(scope="session")
def e10():
    return make_standard("E10")


@pytest.fixture(scope="session")
def e10_run(e10):
    return vinberg_roots(e10, E10_CONTROLLER)


@pytest.fixture(scope="session")
def e10_chamber(e10_run):
    return e10_run.chamber()


def small_chamber(name, controller=(1, 0, 0)):
    return vinberg_roots(make_standard(name), controller).chamber()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

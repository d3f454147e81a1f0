import pytest

from semiclassical import make_catalog_potential

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def harmonic():
    return make_catalog_potential("harmonic", {"k": 1.0})


@pytest.fixture(scope="session")
def poschl_teller():
    return make_catalog_potential("poschl_teller", {"V0": 1.0, "alpha": 1.0})


@pytest.fixture(scope="session")
def tan2():
    return make_catalog_potential("trig_tan2", {"V0": 1.0, "alpha": 1.0})


@pytest.fixture(scope="session")
def morse():
    return make_catalog_potential("morse", {"D": 1.0, "alpha": 1.0})


@pytest.fixture(scope="session")
def gaussian():
    return make_catalog_potential("gaussian_well", {"V0": 5.0, "w": 1.0})


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

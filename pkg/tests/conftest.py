import pytest

from cogband.netmodel import build_layout, place_user
from cogband.propagation import OMNI, default_bands
from cogband.rates import LinkBudget


@pytest.fixture
def bands():
    return default_bands()


@pytest.fixture
def budget():
    return LinkBudget()


@pytest.fixture
def omni_layout():
    return build_layout(pattern=OMNI)


@pytest.fixture
def ref_pair(omni_layout, bands):
    """Two-user reference drop: omnidirectional site, users on the x axis at 0.5 and 1.0 km."""
    return [
        place_user(omni_layout, 0, (500.0, 0.0), bands, serving_sector=0),
        place_user(omni_layout, 1, (1000.0, 0.0), bands, serving_sector=0),
    ]


_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import pytest

from ccslab.core import DensityState, PureState
from ccslab.families import bell_phi_vector
from ccslab.sampling import ginibre_state, rng_for
from ccslab.twoqubit import canonical_events


@pytest.fixture
def pair():
    return canonical_events()


@pytest.fixture
def bell_state():
    return PureState(bell_phi_vector())


@pytest.fixture
def bell_density():
    return DensityState.from_vector(bell_phi_vector())


@pytest.fixture
def full_support_state():
    return ginibre_state(4, rng_for(7, 0))


@pytest.fixture
def max_mixed():
    return DensityState.maximally_mixed(4)


def assert_close(actual, expected, tol=1e-12):
    assert abs(actual - expected) <= tol, f"{actual} != {expected} (tol {tol})"


def pytest_terminal_summary(terminalreporter):
    import conftest_acceptance

    if conftest_acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(conftest_acceptance.LINES):
            terminalreporter.write_line(line)

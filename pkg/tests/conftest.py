import pytest

from expr import equivalent
from mech import JetChart, LagrangianSystem
from models import build_model


@pytest.fixture(scope="session")
def pu():
    return build_model("pais-uhlenbeck")


@pytest.fixture(scope="session")
def damped_pu():
    return build_model("pais-uhlenbeck-damped")


@pytest.fixture(scope="session")
def kepler():
    return build_model("kepler")


@pytest.fixture(scope="session")
def flrw():
    return build_model("flrw")


@pytest.fixture(scope="session")
def rotor():
    return build_model("damped-rotor")


@pytest.fixture
def oscillator():
    """Harmonic oscillator L = q'^2/2 - q^2/2 on a first-order chart."""
    chart = JetChart({"q": 1}, name="oscillator")
    return LagrangianSystem(chart, "q'^2/2 - q^2/2", name="oscillator")


@pytest.fixture
def assert_equal():
    """Golden comparison: ``expected`` is written in the chart's grammar."""

    def check(actual, expected, chart, proved=False):
        outcome = equivalent(actual, chart.parse(expected))
        assert outcome.holds, f"{actual} != {expected} ({outcome.verdict.value}, witness {outcome.witness})"
        if proved:
            assert outcome.verdict.value == "proved-equal", f"{actual} only {outcome.verdict.value} to {expected}"
        return outcome

    return check

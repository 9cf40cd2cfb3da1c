import os

import pytest
from hypothesis import HealthCheck, settings

from symfusion.classifier import Rank3Params, Rank4Params, build_rank3, build_rank4

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = os.path.join(os.path.dirname(__file__), "data")
SMALL_PRIMES = [5, 7, 11, 13, 17, 19, 23, 29, 31]


@pytest.fixture(scope="session")
def s3():
    return build_rank3(Rank3Params(0, 1, 0, 1))


@pytest.fixture(scope="session")
def ver7():
    return build_rank3(Rank3Params(1, 1, 0, 1))


@pytest.fixture(scope="session")
def z4():
    return build_rank4(Rank4Params(0, 0, 0, 1, 0, 0))


@pytest.fixture(scope="session")
def a4():
    return build_rank4(Rank4Params(1, 2, 1, 0, 0, 0))


@pytest.fixture(scope="session")
def izumi_xu():
    return build_rank4(Rank4Params(1, 3, 1, 0, 0, 0))


@pytest.fixture
def data_path():
    return lambda name: os.path.join(DATA, name)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.format_line(n))

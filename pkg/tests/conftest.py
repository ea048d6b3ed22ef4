import os

import pytest
from hypothesis import HealthCheck, settings

from crnlift import networks
from crnlift.independence import check_independence
from crnlift.reduction import reduce_network

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def reduced(name: str, independent: bool = True):
    N = networks.load(name)
    R = reduce_network(N, N.intermediates_hint)
    if independent:
        check_independence(R)
    return R


@pytest.fixture(scope="session")
def triangle():
    return reduced("triangle")


@pytest.fixture(scope="session")
def mapk():
    return reduced("mapk")


@pytest.fixture(scope="session")
def conradi():
    return reduced("conradi")


# acceptance summary: one line per criterion ------------------------------------------

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    marks = getattr(report, "criterion", None)
    if marks is None:
        return
    number, title = marks
    entry = _CRITERIA.setdefault(number, {"title": title, "outcome": "PASS", "seconds": 0.0})
    entry["seconds"] += report.duration
    if report.failed:
        entry["outcome"] = "FAIL"
    elif report.skipped and entry["outcome"] == "PASS" and report.when in ("setup", "call"):
        entry["outcome"] = "SKIP"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {e['outcome']:4s} {e['seconds']:7.2f} s  {e['title']}")

import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_CRITERIA: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion reported in the summary")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        outcome = "SKIP" if report.skipped else ("PASS" if report.passed else "FAIL")
        _CRITERIA[report.nodeid] = (marker, outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _CRITERIA.values():
        terminalreporter.write_line(f"{outcome}  {name}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def synthetic_csv(tmp_path_factory):
    from dstwarp.synthetic import write_synthetic_csv

    path = tmp_path_factory.mktemp("data") / "synthetic.csv"
    write_synthetic_csv(path, start="2001-01-01T00", hours=2 * 8760, seed=7)
    return path

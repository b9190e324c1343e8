import numpy as np
import pytest

from quatrec.signal import QSignal2D

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _criteria.append((mark.args[0], mark.args[1], item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n, title, name, outcome in sorted(_criteria, key=lambda c: (c[0], c[2])):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"AC{n:<3} {verdict}  {title}  [{name}]")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def rand_signal(rng, rows, cols):
    return QSignal2D.random(rows, cols, rng)

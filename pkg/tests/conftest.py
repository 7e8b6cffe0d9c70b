import numpy as np
import pytest

from fermion_ness import ReservoirSpec, SystemParams


@pytest.fixture
def sym():
    return SystemParams.symmetric(omega=1.0, delta=0.3, gamma=0.05)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def fermi(t, mu):
    return ReservoirSpec.fermionic(t, mu)


def bose(t):
    return ReservoirSpec.bosonic(t)


# -- acceptance summary: one line per criterion --------------------------------

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "seen": False})
    if report.when == "call" or report.failed:
        entry["seen"] = True
        entry["ok"] = entry["ok"] and not report.failed


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["ok"] and entry["seen"] else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {entry['title']}")

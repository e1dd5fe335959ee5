import numpy as np
import pytest

from kalmanson import _kernels

# Worked matrices from the consecutive-ones discussion.
M1 = np.array([[1, 1, 0, 0, 0],
               [0, 0, 1, 1, 0],
               [1, 0, 0, 0, 0],
               [0, 1, 1, 1, 0]], dtype=np.uint8)
M2 = np.array([[0, 0, 1, 1, 0],
               [1, 1, 1, 0, 0],
               [0, 1, 0, 0, 1],
               [1, 1, 1, 0, 1]], dtype=np.uint8)
M3 = np.array([[1, 0, 0, 1, 1],
               [0, 1, 1, 0, 0],
               [1, 1, 0, 1, 1],
               [0, 0, 0, 0, 1]], dtype=np.uint8)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=["numpy", "loops"])
def kernels(request):
    return _kernels.numpy_kernels if request.param == "numpy" else _kernels.loop_kernels


# --------------------------------------------------------------------------
# one PASS/FAIL line per acceptance criterion

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    mark = _criteria_marks.get(report.nodeid)
    if mark is None:
        return
    num, title = mark
    entry = _criteria.setdefault(num, {"title": title, "passed": 0, "failed": 0})
    entry["passed" if report.passed else "failed"] += 1


_criteria_marks = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criteria_marks[item.nodeid] = m.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria, key=str):
        e = _criteria[num]
        verdict = "PASS" if e["failed"] == 0 else "FAIL"
        terminalreporter.write_line(
            f"criterion {num}: {verdict}  {e['title']}  ({e['passed']} passed, {e['failed']} failed)")

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gcx.graph import DirectedOrderedGraph, complete_graph, theta  # noqa: E402


@pytest.fixture
def theta_graph():
    return theta()


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def prism():
    return DirectedOrderedGraph(
        6, ((1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (1, 4), (2, 5), (3, 6))
    )


_CRITERIA: dict[int, str] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    number = int(name.split("_")[2])
    if report.failed:
        _CRITERIA[number] = "FAIL"
    elif report.when == "call" and report.passed:
        _CRITERIA.setdefault(number, "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {number}: {_CRITERIA[number]}")

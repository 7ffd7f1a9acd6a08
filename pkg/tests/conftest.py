from collections import defaultdict

import pytest

_OUTCOMES = defaultdict(list)

CRITERIA = {
    1: "Lebesgue constants of recursive LGL nodes",
    2: "FE matrix condition numbers",
    3: "interpolation errors of fA and fB",
    4: "property suites",
    5: "monotone trend checks",
}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    k = report.user_properties and dict(report.user_properties).get("criterion")
    if k:
        _OUTCOMES[k].append(report.outcome == "passed")


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        item.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for k, title in CRITERIA.items():
        results = _OUTCOMES.get(k)
        if not results:
            terminalreporter.write_line(f"criterion {k} [{title}]: NOT RUN")
            continue
        status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {k} [{title}]: {status} ({sum(results)}/{len(results)} checks)")

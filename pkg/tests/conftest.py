import re

_CRITERIA = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d)_(\w+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        key = (int(m.group(1)), m.group(2).replace("_", " "))
        prev = _CRITERIA.get(key, "PASS")
        _CRITERIA[key] = "PASS" if prev == "PASS" and report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (n, title), status in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"criterion {n} ({title}): {status}")

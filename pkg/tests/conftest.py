import re

_AC_RESULTS = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_ac(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2))
    if report.when == "call" or report.outcome != "passed":
        prev = _AC_RESULTS.get(key, "PASS")
        _AC_RESULTS[key] = "PASS" if prev == "PASS" and report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), status in sorted(_AC_RESULTS.items()):
        terminalreporter.write_line(f"AC{num:02d} {name:<40} {status}")

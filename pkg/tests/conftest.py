import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    failed = report.failed or (report.when == "call" and report.skipped)
    entry = _ACCEPTANCE.setdefault(number, {"title": title, "passed": True, "ran": False, "detail": ""})
    if report.when == "call":
        entry["ran"] = True
        entry["detail"] = dict(item.user_properties).get("detail", "")
    if failed:
        entry["passed"] = False


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        e = _ACCEPTANCE[number]
        status = "PASS" if e["passed"] and e["ran"] else "FAIL"
        detail = f" ({e['detail']})" if e["detail"] else ""
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {e['title']}{detail}")
    passed = sum(e["passed"] and e["ran"] for e in _ACCEPTANCE.values())
    terminalreporter.write_line(f"{passed}/{len(_ACCEPTANCE)} criteria passed")

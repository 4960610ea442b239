"""Shared test wiring.

Collects per-class outcomes from test_acceptance.py and prints one
PASS/FAIL line per criterion class at the end of the run, so the overall
verdict is readable without scrolling through the full pytest output.
"""

import pytest

_results: "dict[str, dict]" = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or item.cls is None:
        return
    if getattr(item.module, "__name__", "") != "test_acceptance":
        return
    doc = (item.cls.__doc__ or item.cls.__name__).strip().splitlines()[0]
    slot = _results.setdefault(item.cls.__name__, {"label": doc, "passed": 0, "failed": 0})
    if report.passed:
        slot["passed"] += 1
    else:
        slot["failed"] += 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for slot in _results.values():
        total = slot["passed"] + slot["failed"]
        verdict = "PASS" if slot["failed"] == 0 else "FAIL"
        terminalreporter.write_line(
            f"{verdict}  {slot['label']}  [{slot['passed']}/{total} checks]"
        )

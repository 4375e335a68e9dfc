import time

import pytest

SUITE_BUDGET_S = 60.0

_start = time.perf_counter()


def pytest_sessionstart(session):
    global _start
    _start = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    elapsed = time.perf_counter() - _start
    ok = elapsed < SUITE_BUDGET_S
    terminalreporter.write_line(f"suite runtime {elapsed:.1f}s, budget {SUITE_BUDGET_S:.0f}s: {'PASS' if ok else 'FAIL'}")


@pytest.hookimpl(trylast=True)
def pytest_sessionfinish(session, exitstatus):
    if time.perf_counter() - _start >= SUITE_BUDGET_S and exitstatus == 0:
        session.exitstatus = 1

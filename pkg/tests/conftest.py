import os
import sys
import time

sys.path.insert(0, os.path.dirname(__file__))

SUITE_LIMIT_S = 600
_start = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
    elapsed = time.perf_counter() - _start
    terminalreporter.write_line(f"suite runtime {elapsed:.1f}s (limit {SUITE_LIMIT_S}s)")


def pytest_sessionfinish(session, exitstatus):
    if time.perf_counter() - _start > SUITE_LIMIT_S and exitstatus == 0:
        session.exitstatus = 1

import time
from contextlib import contextmanager

import pytest

# (number, title, passed, seconds, limit) for every acceptance criterion that ran
CRITERIA = []


@contextmanager
def _criterion(number, title, limit):
    start = time.perf_counter()
    passed = False
    try:
        yield
        passed = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < limit
        CRITERIA.append((number, title, passed and within, elapsed, limit))
    assert within, f"criterion {number} took {elapsed:.1f} s, limit {limit} s"


@pytest.fixture
def criterion():
    """Context manager that records pass/fail and enforces the runtime bound."""
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, elapsed, limit in sorted(CRITERIA):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status}  {number:2d}. {title}  ({elapsed:.2f} s, limit {limit:g} s)")

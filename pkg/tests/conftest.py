import time
from contextlib import contextmanager

import pytest

CRITERIA: dict[int, str] = {}


@contextmanager
def criterion(number: int, title: str, limit: float):
    """Time a criterion body and record a one-line verdict, even when it raises."""
    state = {"detail": ""}
    start = time.perf_counter()
    ok = False
    try:
        yield state
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < limit
        verdict = "PASS" if ok and within else "FAIL"
        timing = f"{elapsed:.2f}s < {limit:g}s" if within else f"{elapsed:.2f}s exceeds {limit:g}s"
        CRITERIA[number] = f"criterion {number} [{verdict}] {title}: {state['detail']} ({timing})"
    assert within, f"criterion {number} took {elapsed:.1f}s, limit {limit}s"


@pytest.fixture
def record():
    return criterion


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[n])

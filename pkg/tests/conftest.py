import contextlib
import time

import pytest

ACCEPTANCE = {}


@contextlib.contextmanager
def _criterion(number, title, limit=None):
    """Record one acceptance criterion's outcome (and optional runtime limit)."""
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        if limit is not None:
            assert elapsed < limit, f"runtime {elapsed:.2f}s exceeds {limit}s"
    except BaseException as exc:
        ACCEPTANCE[number] = ("FAIL", title, str(exc).splitlines()[0] if str(exc) else type(exc).__name__)
        raise
    ACCEPTANCE[number] = ("PASS", title, f"{time.perf_counter() - start:.2f}s")


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        status, title, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{status}] {number:>2}. {title} ({detail})")

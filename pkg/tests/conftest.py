import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

AC_RESULTS: list[str] = []


@pytest.fixture
def ac():
    """``with ac(n, title):`` records one pass/fail line for acceptance criterion ``n``."""

    @contextmanager
    def run(n, title):
        t0 = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            line = f"AC{n} FAIL {title} ({time.perf_counter() - t0:.2f}s): {type(exc).__name__}: {exc}"
            AC_RESULTS.append(line)
            print(line)
            raise
        line = f"AC{n} PASS {title} ({time.perf_counter() - t0:.2f}s)"
        AC_RESULTS.append(line)
        print(line)

    return run


def pytest_terminal_summary(terminalreporter):
    if AC_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(AC_RESULTS, key=lambda s: int(s.split()[0][2:])):
            terminalreporter.write_line(line)

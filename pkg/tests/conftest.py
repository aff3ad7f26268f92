import time
from contextlib import contextmanager

import pytest

_LINES = []


class _Criterion:
    def __init__(self):
        self.detail = ""
        self.ok = True


@pytest.fixture
def acceptance():
    """``with acceptance(n, budget) as c:`` records one PASS/FAIL line for criterion ``n``.

    A failed assertion inside the block, a false ``c.ok`` or a run longer than
    ``budget`` seconds all count as FAIL.
    """

    def record(number, ok, detail, seconds):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail} [{seconds:.1f} s]"
        _LINES.append(line)
        print(line)

    @contextmanager
    def criterion(number, budget):
        c = _Criterion()
        start = time.perf_counter()
        try:
            yield c
        except AssertionError as err:
            record(number, False, f"{c.detail or 'check failed'} ({err})", time.perf_counter() - start)
            raise
        seconds = time.perf_counter() - start
        over = seconds >= budget
        detail = c.detail + (f"; over the {budget:g} s budget" if over else "")
        record(number, c.ok and not over, detail, seconds)
        assert c.ok and not over, detail

    return criterion


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)

import time
from contextlib import contextmanager

import pytest

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


class Criterion:
    """Records one acceptance line per criterion, with its runtime bound."""

    def __init__(self, store):
        self.store = store

    @contextmanager
    def __call__(self, number: int, title: str, limit_s: float):
        info = {"detail": ""}
        t0 = time.perf_counter()
        try:
            yield info
        except BaseException as exc:
            elapsed = time.perf_counter() - t0
            self.store[number] = (False, title, elapsed, f"{type(exc).__name__}: {exc}".splitlines()[0])
            raise
        elapsed = time.perf_counter() - t0
        ok = elapsed < limit_s
        detail = info["detail"] if ok else f"took {elapsed:.1f}s, limit {limit_s:.0f}s"
        self.store[number] = (ok, title, elapsed, detail)
        assert ok, detail


@pytest.fixture
def criterion(request):
    return Criterion(request.config.stash[_RESULTS])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, title, elapsed, detail = results[number]
        line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title} ({elapsed:.2f}s)"
        if detail:
            line += f": {detail}"
        terminalreporter.write_line(line)

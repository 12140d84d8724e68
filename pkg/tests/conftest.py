from __future__ import annotations

import random
import time
from contextlib import contextmanager

import pytest

_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture
def criterion(request):
    """Context manager timing one acceptance criterion and recording PASS/FAIL."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    @contextmanager
    def run(label: str, limit_s: float):
        start = time.perf_counter()
        try:
            yield
        except BaseException as exc:
            msg = str(exc).splitlines()[0] if str(exc) else ""
            lines.append(f"FAIL  {label}: {type(exc).__name__} {msg}")
            raise
        elapsed = time.perf_counter() - start
        if elapsed >= limit_s:
            lines.append(f"FAIL  {label}: took {elapsed:.2f}s, limit {limit_s}s")
            pytest.fail(f"{label} took {elapsed:.2f}s (limit {limit_s}s)")
        line = f"PASS  {label} ({elapsed:.2f}s < {limit_s}s)"
        lines.append(line)
        print(line)

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

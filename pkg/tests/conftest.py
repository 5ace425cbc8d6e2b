from __future__ import annotations

import numpy as np
import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def record_criterion(request):
    """Collects one PASS/FAIL line per acceptance criterion for the end-of-run summary."""
    lines = request.config.stash.setdefault(_LINES, [])

    def record(number: int, reports) -> bool:
        ok = all(r.passed for r in reports)
        lines.append(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}")
        lines.extend("    " + r.line() for r in reports)
        print(lines[-len(reports) - 1])
        for r in reports:
            print("    " + r.line())
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

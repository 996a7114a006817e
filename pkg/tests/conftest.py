"""Shared pytest plumbing.

The acceptance module records one line per criterion via the `criterion`
fixture; pytest_terminal_summary echoes them after the run, outside output
capture, so the pass/fail record is always visible.
"""

from contextlib import contextmanager

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    @contextmanager
    def record(num: int, desc: str):
        try:
            yield
        except BaseException:
            ACCEPTANCE_LINES.append(f"FAIL criterion {num:>2}: {desc}")
            raise
        ACCEPTANCE_LINES.append(f"PASS criterion {num:>2}: {desc}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)

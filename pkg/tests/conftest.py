import sys
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Context manager recording one acceptance criterion as PASS or FAIL."""

    @contextmanager
    def record(number, description):
        try:
            yield
        except BaseException as exc:
            if isinstance(exc, pytest.skip.Exception):
                _ACCEPTANCE.append((number, "SKIP", description))
            else:
                _ACCEPTANCE.append((number, "FAIL", description))
            raise
        _ACCEPTANCE.append((number, "PASS", description))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, desc in sorted(_ACCEPTANCE, key=lambda r: (str(r[0]), r[2])):
        terminalreporter.write_line(f"[{status}] criterion {number}: {desc}")

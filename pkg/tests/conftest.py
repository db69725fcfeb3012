import contextlib
import time

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")

_ACCEPTANCE_LINES: dict[int, str] = {}


class _Criterion:
    def __init__(self):
        self.details = []

    def note(self, text):
        self.details.append(text)


@contextlib.contextmanager
def _record(number, title):
    crit = _Criterion()
    start = time.perf_counter()
    try:
        yield crit
    except BaseException as exc:
        _ACCEPTANCE_LINES[number] = f"criterion {number} FAIL  {title}: {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        print(_ACCEPTANCE_LINES[number])
        raise
    elapsed = time.perf_counter() - start
    detail = "; ".join(crit.details)
    _ACCEPTANCE_LINES[number] = f"criterion {number} PASS  {title} ({detail}; {elapsed:.2f} s)"
    print(_ACCEPTANCE_LINES[number])


@pytest.fixture
def criterion():
    """Context manager recording one acceptance line: ``with criterion(1, "title") as c:``."""
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(_ACCEPTANCE_LINES[number])

from contextlib import contextmanager

import pytest

_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """``with criterion(n, title) as c:`` records one PASS/FAIL line; set ``c["detail"]`` for context."""

    @contextmanager
    def record(number: int, title: str):
        info = {"detail": ""}
        try:
            yield info
        except BaseException as exc:
            msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            _LINES[number] = f"criterion {number} FAIL  {title}: {msg[:160]}"
            raise
        _LINES[number] = f"criterion {number} PASS  {title}" + (f": {info['detail']}" if info["detail"] else "")
        print(_LINES[number])

    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_LINES):
        terminalreporter.write_line(_LINES[n])

import sys
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_VERDICTS: list[str] = []


@pytest.fixture
def criterion():
    """``with criterion(k, text):`` records one PASS/FAIL line for the block."""
    @contextmanager
    def record(k: int, text: str):
        try:
            yield
        except BaseException:
            line = f"CRITERION {k} FAIL: {text}"
            _VERDICTS.append(line)
            print(line)
            raise
        line = f"CRITERION {k} PASS: {text}"
        _VERDICTS.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS):
            terminalreporter.write_line(line)

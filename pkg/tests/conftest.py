import pytest
from hypothesis import settings

settings.register_profile("repro", deadline=None, derandomize=True)
settings.load_profile("repro")

_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Recorder for acceptance criteria: ``acceptance(n, title, ok, detail)``."""

    def record(number, title, ok, detail=""):
        _ACCEPTANCE[number] = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (
            f" ({detail})" if detail else ""
        )
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[key])

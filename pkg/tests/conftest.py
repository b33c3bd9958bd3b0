from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def toy_dir() -> Path:
    return FIXTURES / "toy"


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


# Verdict lines from the acceptance module, echoed after the run.
VERDICTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

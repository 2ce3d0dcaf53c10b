import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gbs.graph import rose  # noqa: E402

RESULTS = []


def record(label, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
    RESULTS.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)


@pytest.fixture
def e1():
    return rose((7, 30), (6, 15), (10, 8))


@pytest.fixture
def e2():
    return rose((14, 30), (6, 15), (10, 8), (30, 21))


@pytest.fixture
def e2p():
    return rose((14, 30), (6, 15), (10, 8), (14, 21))

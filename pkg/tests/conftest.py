import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cnt_receiver import CntParams, WaveSpec  # noqa: E402


@pytest.fixture
def params():
    return CntParams()


@pytest.fixture
def incoming():
    return WaveSpec(1.0, 1.0)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for r in sorted(results, key=lambda r: r.number):
            terminalreporter.write_line(r.line())

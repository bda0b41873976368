import sys
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"
sys.path.insert(0, str(Path(__file__).parent))

from helpers import make_pair  # noqa: E402


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def eel_pair():
    return make_pair(
        "うなぎ が 食べ たい な",
        "I feel like eating eel .",
        ja_pos="noun particle verb auxiliary_verb particle",
        heads=[2, 0, 4, 2, 4, 2],
    )


# One PASS/FAIL line per acceptance criterion, shown after the test summary.
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])

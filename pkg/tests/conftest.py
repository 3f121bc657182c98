import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from simpleqe.encoders import StubEncoder  # noqa: E402
from simpleqe.features import FrequencyTable  # noqa: E402
from simpleqe.synthetic import SyntheticCorpus  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def synthetic():
    return SyntheticCorpus(seed=7)


@pytest.fixture
def table():
    return FrequencyTable.from_counts({"the": 1000, "cat": 50, "sleeps": 20, "simple": 5, "text": 10})


@pytest.fixture
def stub():
    return StubEncoder(seed=3)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)

import numpy as np
import pytest

from relieflab.data import Dataset, categoric, numeric

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


@pytest.fixture
def xor_dataset():
    rows = [[0, 0], [0, 1], [1, 0], [1, 1]]
    return Dataset.from_rows([categoric("a", 2), categoric("b", 2)], rows, [0, 1, 1, 0])


@pytest.fixture
def numeric_pair():
    rows = [[0.0, 0.0], [0.5, 0.25], [1.0, 1.0]]
    return Dataset.from_rows([numeric("x"), numeric("y")], rows, [0, 1, 0])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

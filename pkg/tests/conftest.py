import pytest

from simsim import CommutingTuple, Matrix, standard_basis

from acceptance_log import LINES


def pytest_terminal_summary(terminalreporter):
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def ex_A():
    return CommutingTuple([Matrix.from_rows([[0, 1], [0, 0]])])


@pytest.fixture
def ex_B():
    return CommutingTuple([Matrix.from_rows([[-1, 1], [-1, 1]])])


@pytest.fixture
def ex_S():
    return Matrix.from_rows([[-1, 2], [-1, 1]])


@pytest.fixture
def e12():
    return standard_basis(2)

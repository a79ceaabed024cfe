import numpy as np
import pytest

from palindromic.params import ProbabilityTable
from helpers import mirrored


@pytest.fixture
def rng():
    return np.random.default_rng(20190614)


@pytest.fixture
def three_way_table():
    return ProbabilityTable(np.array([15, 9, 1, 15, 15, 1, 9, 15]) / 80.0)


@pytest.fixture
def ci_given_third():
    return ProbabilityTable(np.array([32, 8, 8, 2, 2, 8, 8, 32]) / 100.0)


@pytest.fixture
def marginal_ci_table():
    return ProbabilityTable(np.array([90, 60, 40, 10, 10, 40, 60, 90]) / 400.0)


@pytest.fixture
def reversal_table():
    return ProbabilityTable(np.array([100, 50, 40, 10, 10, 40, 50, 100]) / 400.0)


@pytest.fixture
def four_way_table():
    return ProbabilityTable(mirrored([4095, 91, 91, 47, 91, 47, 47, 91]))


@pytest.fixture
def pair_block_table():
    return ProbabilityTable(mirrored([100, 10, 10, 100, 10, 100, 100, 10]))


@pytest.fixture
def four_cycle_counts():
    return [mirrored([75, 15, 15, 3, 15, 15, 15, 15]),
            mirrored([3, 15, 15, 75, 15, 15, 15, 15]),
            mirrored([35, 35, 7, 7, 7, 35, 7, 35])]


@pytest.fixture
def grades_counts():
    return np.array([22, 3, 3, 0, 1, 0, 1, 9, 6, 2, 2, 1, 3, 2, 1, 22], dtype=float)

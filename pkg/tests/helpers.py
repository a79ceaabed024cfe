import numpy as np

from palindromic.params import ProbabilityTable
from palindromic.tensor import popcount


def mirrored(first_half):
    '''
    Full 2^d table from its a_d = 0 half, completed by p(a) = p(~a).
    '''
    half = np.asarray(first_half, dtype=float)
    return np.concatenate((half, half[::-1]))


def dense_hadamard(d):
    size = 1 << d
    return np.array([[(-1.0) ** popcount(a & b) for b in range(size)] for a in range(size)])


def random_table(rng, d, low=0.2):
    return ProbabilityTable(rng.uniform(low, 1.0, size=1 << d))


def random_palindromic_table(rng, d, low=0.2):
    half = rng.uniform(low, 1.0, size=1 << (d - 1))
    return ProbabilityTable(mirrored(half))

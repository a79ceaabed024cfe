'''
Palindromic tables generated by a linear triangular system.

With D_v = (-1)^{a_v}, variable 1 is a fair coin and every later variable
follows a linear regression on its predecessors without constant term,

    P(A_s = a_s | a_1, ..., a_{s-1}) = (1 + D_s sum_{j<s} beta_sj D_j) / 2.

Every such system yields a palindromic table.  The moments obey the
recursion xi_b = sum_j beta_sj xi_{(b - s) ^ j} for the largest s in b, so
odd orders stay zero.
'''
import json
import logging

import numpy as np
from joblib import Parallel, delayed

from .errors import InfeasibleCoefficientsError, InvalidArgumentError
from .params import MOMENT, CountTable, ParamVector, ProbabilityTable
from .symmetry import wilks_palindromic
from .tensor import cell_bits, check_dim, n_cells
from .util import log_progress

logger = logging.getLogger(__name__)


class TriangularSystem(object):
    '''
    Strictly lower-triangular coefficients beta[s, j], j < s (0-based array,
    1-based in the docs).

    Every conditional probability lies in (0, 1) exactly when each row has
    sum_j |beta_sj| < 1: the history signs D_j range over all of {-1, 1},
    so the row sum is attained.
    '''
    def __init__(self, beta):
        beta = np.array(beta, dtype=float)
        if beta.ndim != 2 or beta.shape[0] != beta.shape[1]:
            raise InvalidArgumentError('beta must be a square matrix')
        self.d = check_dim(beta.shape[0])
        if not np.all(np.isfinite(beta)):
            raise InvalidArgumentError('beta must be finite')
        if np.any(np.triu(beta) != 0):
            raise InvalidArgumentError('beta must be strictly lower triangular')
        rows = np.abs(beta).sum(axis=1)
        worst = int(np.argmax(rows))
        if rows[worst] >= 1.0:
            raise InfeasibleCoefficientsError(
                'row {} has sum |beta| = {!r} >= 1; some conditional probability leaves '
                '(0, 1)'.format(worst + 1, rows[worst]))
        beta.setflags(write=False)
        self.beta = beta

    @classmethod
    def from_json(cls, source):
        '''
        ``{"d": 3, "beta": [[b21], [b31, b32]]}``: rows 2..d of the lower
        triangle, row s holding s - 1 numbers.  A leading empty row for
        s = 1 is accepted.
        '''
        data = json.loads(source) if isinstance(source, str) else source
        try:
            d = check_dim(data['d'])
            rows = [list(r) for r in data.get('beta', [])]
        except (KeyError, TypeError) as exc:
            raise InvalidArgumentError('malformed triangular system: {}'.format(exc))
        if len(rows) == d and not rows[0]:
            rows = rows[1:]
        if len(rows) != d - 1:
            raise InvalidArgumentError('expected {} rows of beta, got {}'.format(d - 1, len(rows)))
        beta = np.zeros((d, d))
        for s, row in enumerate(rows, start=1):
            if len(row) != s:
                raise InvalidArgumentError(
                    'row {} of beta needs {} entries, got {}'.format(s + 1, s, len(row)))
            beta[s, :s] = row
        return cls(beta)

    def to_json(self):
        return {'d': self.d, 'beta': [list(map(float, self.beta[s, :s])) for s in range(1, self.d)]}

    def __repr__(self):
        return 'TriangularSystem(d={}, beta={})'.format(self.d, self.beta.tolist())


def exact_table(sys):
    signs = 1.0 - 2.0 * cell_bits(sys.d)
    p = np.full(n_cells(sys.d), 0.5)
    for s in range(1, sys.d):
        p *= 0.5 * (1.0 + signs[:, s] * (signs[:, :s] @ sys.beta[s, :s]))
    return ProbabilityTable(p)


def xi_recursion(sys):
    '''
    Moments by extending one variable at a time: entries without the new
    variable s are unchanged and xi_{b + s} = sum_j beta_sj xi_{b ^ j}.
    '''
    xi = np.array([1.0, 0.0])
    for s in range(1, sys.d):
        low = np.arange(xi.size)
        new = np.zeros(xi.size)
        for j in range(s):
            new += sys.beta[s, j] * xi[low ^ (1 << j)]
        xi = np.concatenate((xi, new))
    return ParamVector(MOMENT, xi)


def sample(sys, n, seed=0):
    '''
    Counts of ``n`` draws obtained by simulating the system forward with a
    ``numpy.random.default_rng(seed)`` stream.
    '''
    if n < 1:
        raise InvalidArgumentError('sample size must be at least 1')
    rng = np.random.default_rng(seed)
    bits = np.zeros((n, sys.d), dtype=np.int64)
    bits[:, 0] = rng.random(n) >= 0.5
    for s in range(1, sys.d):
        signs = 1.0 - 2.0 * bits[:, :s]
        prob_zero = 0.5 * (1.0 + signs @ sys.beta[s, :s])
        bits[:, s] = rng.random(n) >= prob_zero
    cells = bits @ (1 << np.arange(sys.d))
    return CountTable(np.bincount(cells, minlength=n_cells(sys.d)).astype(float))


def random_triangular_system(d, seed=0, max_row_sum=0.9):
    '''
    Random feasible system; each row gets a uniform direction scaled to a
    row sum uniform on (0, max_row_sum).
    '''
    if not 0 < max_row_sum < 1:
        raise InvalidArgumentError('max_row_sum must lie in (0, 1)')
    rng = np.random.default_rng(seed)
    beta = np.zeros((check_dim(d), d))
    for s in range(1, d):
        row = rng.uniform(-1.0, 1.0, size=s)
        beta[s, :s] = row / np.abs(row).sum() * rng.uniform(0.0, max_row_sum)
    return TriangularSystem(beta)


def simulate_wilks(sys, n, reps, seed=0, n_jobs=1):
    '''
    Wilks' palindromic statistic on ``reps`` independent samples of size n.
    Under the system these are approximately chi-squared on 2^(d-1) df.
    '''
    seeds = np.random.SeedSequence(seed).spawn(reps)

    def one(s):
        return wilks_palindromic(sample(sys, n, s))[0]

    values = Parallel(n_jobs=n_jobs)(delayed(one)(s) for s in log_progress(seeds, name='Samples'))
    return np.array(values)

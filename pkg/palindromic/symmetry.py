'''
Palindromic (centrally symmetric) tables: the predicate, the closed-form
maximum-likelihood fit by symmetrization and Wilks' test of symmetry.

A table is palindromic when p(a) = p(~a) for every cell, which in the
first-index-fastest order means the probability vector reads the same
backwards.  Equivalently every odd-order lambda, xi and eta vanishes.
'''
import logging

import numpy as np
from scipy import stats

from . import parameters
from .errors import EmptyDataError, InvalidArgumentError
from .params import (MOMENT, CountTable, ParamVector, ProbabilityTable, xi_from_pi)
from .tensor import hadamard_apply, odd_subsets

logger = logging.getLogger(__name__)


class PalindromicFit(object):
    '''
    Result of ``symmetrize``.

    Attributes
    ----------
    fitted : CountTable
        Complement-pair averages of the observed counts.
    p_hat : ProbabilityTable or None
        fitted / n; None when a complement pair is empty in the data.
    wilks : float
    df : int
        2^(d-1).
    xi_hat : ParamVector
        Moment estimates; odd orders are exactly zero.
    '''
    def __init__(self, fitted, p_hat, wilks, df, xi_hat):
        self.fitted = fitted
        self.p_hat = p_hat
        self.wilks = wilks
        self.df = df
        self.xi_hat = xi_hat

    @property
    def pvalue(self):
        return wilks_pvalue(self.wilks, self.df)

    def __repr__(self):
        return 'PalindromicFit(d={}, w={:.4f}, df={})'.format(self.fitted.d, self.wilks, self.df)


def _probabilities(t):
    if isinstance(t, ProbabilityTable):
        return t.pi
    if isinstance(t, CountTable):
        return t.proportions()
    raise InvalidArgumentError('expected a ProbabilityTable or CountTable, got {!r}'.format(t))


def reverse_complement(t):
    return ProbabilityTable(t.pi[::-1])


def odd_order_max(p):
    '''
    Largest magnitude among the odd-order entries of a parameter vector.
    '''
    return float(np.max(np.abs(p.values[odd_subsets(p.d)])))


def is_palindromic(t, tol=None, route='cells'):
    '''
    True iff |p(a) - p(~a)| <= tol for every cell.  With ``route='moments'``
    the test is instead that every odd-order xi is at most tol in magnitude.
    '''
    tol = parameters.exact_tol if tol is None else tol
    if tol < 0:
        raise InvalidArgumentError('tolerance must be nonnegative')
    pi = _probabilities(t)
    if route == 'cells':
        return bool(np.max(np.abs(pi - pi[::-1])) <= tol)
    if route == 'moments':
        return odd_order_max(xi_from_pi(ProbabilityTable(pi, floor=0.0))) <= tol
    raise InvalidArgumentError('unknown route {!r}'.format(route))


def _check_counts(c):
    if not isinstance(c, CountTable):
        c = CountTable(c)
    if c.n <= 0:
        raise EmptyDataError('count table is empty')
    return c


def _xlogy_ratio(x, y):
    '''
    Sum of x log(x / y) over cells with x > 0.
    '''
    pos = x > 0
    return float(np.sum(x[pos] * np.log(x[pos] / y[pos])))


def wilks_palindromic(c):
    '''
    Likelihood-ratio statistic for p(a) = p(~a):

        w = 2 sum_a n(a) log{2 n(a) / (n(a) + n(~a))}

    with 0 log 0 = 0, on 2^(d-1) degrees of freedom.
    '''
    c = _check_counts(c)
    n = c.counts
    w = 2.0 * _xlogy_ratio(n, (n + n[::-1]) / 2.0)
    return max(w, 0.0), 1 << (c.d - 1)


def wilks_pvalue(w, df):
    return float(stats.chi2.sf(w, df))


def symmetrize(c):
    c = _check_counts(c)
    n = c.counts
    fitted = (n + n[::-1]) / 2.0
    if np.any(fitted == 0):
        logger.warning('symmetrized table has empty cells; p_hat is not defined')
        p_hat = None
    else:
        p_hat = ProbabilityTable(fitted / c.n)
    xi = hadamard_apply(n) / c.n
    xi[odd_subsets(c.d)] = 0.0
    w, df = wilks_palindromic(c)
    return PalindromicFit(CountTable(fitted), p_hat, w, df, ParamVector(MOMENT, xi))

'''
The continuous side: correlation matrices, median dichotomization and the
arcsin bridge between a Gaussian correlation rho and the moment parameter
xi of the median-dichotomized pair,

    xi = (2 / pi) arcsin(rho),    rho = sin(pi xi / 2),

together with the Gaussian fits used next to the binary ones in the grades
case study.
'''
import logging

import numpy as np
import pandas as pd

from . import parameters
from .errors import (DegenerateVarianceError, DomainError, EmptyDataError, InfeasibleError,
                     InvalidArgumentError, InvalidDimensionError, NotChordalError, ParseError,
                     RankError, TableFileError)
from .graphs import decompose
from .params import MOMENT, CountTable, ParamVector, ProbabilityTable, pi_from_xi
from .tensor import hadamard_apply, n_cells, subset_mask

logger = logging.getLogger(__name__)


class DataMatrix(object):
    '''
    n x d observations, one row per unit.
    '''
    def __init__(self, values, columns=None):
        values = np.array(values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2:
            raise InvalidArgumentError('data must be a two-dimensional array')
        if values.shape[0] < 2:
            raise EmptyDataError('need at least two observations, got {}'.format(values.shape[0]))
        if not np.all(np.isfinite(values)):
            row = int(np.argwhere(~np.isfinite(values))[0, 0])
            raise InvalidArgumentError('missing or non-finite value in row {}'.format(row + 1))
        self.values = values
        self.columns = list(columns) if columns is not None else [
            'x{}'.format(j + 1) for j in range(values.shape[1])]

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def d(self):
        return self.values.shape[1]

    def to_frame(self):
        return pd.DataFrame(self.values, columns=self.columns)

    @classmethod
    def from_csv(cls, path):
        '''
        Read comma-separated numbers; a header line is detected when its
        first field is not a number.  Errors carry the file line number.
        '''
        try:
            raw = pd.read_csv(path, header=None, dtype=str, skipinitialspace=True)
        except pd.errors.EmptyDataError:
            raise EmptyDataError('{} is empty'.format(path))
        except pd.errors.ParserError as exc:
            raise ParseError('{}: {}'.format(path, exc))
        except (IOError, OSError) as exc:
            raise TableFileError('cannot read {}: {}'.format(path, exc))
        header = 0
        try:
            float(raw.iloc[0, 0])
        except (TypeError, ValueError):
            header = 1
        columns = list(raw.iloc[0]) if header else None
        body = raw.iloc[header:]
        values = body.apply(pd.to_numeric, errors='coerce')
        bad = values.isna().to_numpy()
        if bad.any():
            row, col = np.argwhere(bad)[0]
            raise ParseError('{}: cannot read {!r} in column {}'.format(
                path, body.iat[row, col], col + 1), line=int(row) + header + 1)
        return cls(values.to_numpy(dtype=float), columns)


class CorrMatrix(object):
    '''
    Symmetric matrix with unit diagonal.
    '''
    def __init__(self, values):
        values = np.array(values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise InvalidArgumentError('correlation matrix must be square')
        if not np.allclose(values, values.T, atol=1e-12):
            raise InvalidArgumentError('correlation matrix must be symmetric')
        if not np.allclose(np.diag(values), 1.0, atol=1e-12):
            raise InvalidArgumentError('correlation matrix must have a unit diagonal')
        values = (values + values.T) / 2.0
        np.fill_diagonal(values, 1.0)
        self.values = values

    @property
    def d(self):
        return self.values.shape[0]

    def __getitem__(self, pair):
        i, j = pair
        return float(self.values[i - 1, j - 1])

    def check_positive_definite(self):
        smallest = np.linalg.eigvalsh(self.values).min()
        if smallest <= parameters.pd_tol:
            raise RankError(
                'correlation matrix is not positive definite (smallest eigenvalue {:.3e})'.format(
                    smallest))
        return self

    def inverse(self):
        if np.linalg.cond(self.values) > parameters.rank_cond_max:
            raise RankError('correlation matrix is singular')
        return np.linalg.inv(self.values)

    def to_frame(self, labels=None):
        return pd.DataFrame(self.values, index=labels, columns=labels)

    def __repr__(self):
        return 'CorrMatrix({})'.format(np.array2string(self.values, precision=3))


def corr_from_data(m):
    sd = m.values.std(axis=0)
    if np.any(sd == 0):
        col = int(np.flatnonzero(sd == 0)[0])
        raise DegenerateVarianceError('column {} ({}) is constant'.format(col + 1, m.columns[col]))
    return CorrMatrix(np.corrcoef(m.values, rowvar=False))


def concentrations(R):
    return np.diag(R.inverse())


def partial_corr(R):
    '''
    Partial correlations given all remaining variables,
    -P_st / sqrt(P_ss P_tt) with P the inverse of R.
    '''
    precision = R.inverse()
    scale = np.sqrt(np.diag(precision))
    partial = -precision / np.outer(scale, scale)
    np.fill_diagonal(partial, 1.0)
    return CorrMatrix((partial + partial.T) / 2.0)


def sum_score_correlation(m, block, target):
    '''
    Correlation of variable ``target`` with the sum of the variables in
    ``block`` (1-based column numbers).
    '''
    cols = [v - 1 for v in block]
    score = m.values[:, cols].sum(axis=1)
    return float(np.corrcoef(score, m.values[:, target - 1])[0, 1])


def median_dichotomize(m, seed=0):
    '''
    Split every column at its sample median and tabulate the 2^d cells.

    Ties are broken by adding seeded uniform jitter of amplitude
    ``parameters.jitter_scale`` times the smallest gap between distinct
    values; values strictly above the median get level 1.  For even n each
    margin is exactly (n/2, n/2).
    '''
    d = m.d
    if d > parameters.max_dim:
        raise InvalidDimensionError('{} variables exceed the cap of {}'.format(d, parameters.max_dim))
    if m.n % 2:
        logger.info('odd number of observations; margins differ by one')
    rng = np.random.default_rng(seed)
    cells = np.zeros(m.n, dtype=np.int64)
    for j in range(d):
        x = m.values[:, j]
        distinct = np.unique(x)
        gap = np.min(np.diff(distinct)) if distinct.size > 1 else 1.0
        y = x + rng.uniform(-0.5, 0.5, size=m.n) * parameters.jitter_scale * gap
        cells |= (y > np.median(y)).astype(np.int64) << j
    return CountTable(np.bincount(cells, minlength=n_cells(d)).astype(float))


def _check_unit(x, name):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + 1e-12) or not np.all(np.isfinite(x)):
        raise DomainError('{} must lie in [-1, 1], got {!r}'.format(name, x))
    return np.clip(x, -1.0, 1.0)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def xi_from_rho(rho):
    return _scalar(2.0 / np.pi * np.arcsin(_check_unit(rho, 'rho')))


def rho_from_xi(xi):
    return _scalar(np.sin(np.pi / 2.0 * _check_unit(xi, 'xi')))


def quadrant_probability(rho):
    '''
    P(X_1 > 0, X_2 > 0) for a standard bivariate Gaussian pair.
    '''
    return _scalar(0.25 + np.arcsin(_check_unit(rho, 'rho')) / (2.0 * np.pi))


def corr_from_table(t):
    '''
    Correlations of the +-1 coded variables of a table.
    '''
    xi = hadamard_apply(t.pi)
    d = t.d
    R = np.eye(d)
    for s in range(d):
        for u in range(s + 1, d):
            xs, xu, xsu = xi[1 << s], xi[1 << u], xi[(1 << s) | (1 << u)]
            R[s, u] = R[u, s] = (xsu - xs * xu) / np.sqrt((1.0 - xs ** 2) * (1.0 - xu ** 2))
    return CorrMatrix(R)


def trivariate_orthant_table(R):
    '''
    Cell probabilities of three median-dichotomized Gaussians.  The table is
    palindromic and determined by the three pairwise xi = (2/pi) arcsin(rho).
    '''
    if R.d != 3:
        raise InvalidArgumentError('trivariate table needs a 3 x 3 correlation matrix')
    R.check_positive_definite()
    xi = np.zeros(8)
    xi[0] = 1.0
    for s, u in ((1, 2), (1, 3), (2, 3)):
        xi[subset_mask((s, u))] = xi_from_rho(R[s, u])
    return pi_from_xi(ParamVector(MOMENT, xi))


def equicorrelation_table(xi):
    '''
    The trivariate palindromic table with all pairwise moments equal to xi:
    8 pi = (1 + 3xi, 1 - xi, ..., 1 - xi, 1 + 3xi).
    '''
    if not -1.0 / 3.0 < xi < 1.0:
        raise InfeasibleError('equicorrelation xi must lie in (-1/3, 1), got {!r}'.format(xi))
    pi = np.full(8, 1.0 - xi)
    pi[0] = pi[7] = 1.0 + 3.0 * xi
    return ProbabilityTable(pi / 8.0)


def equicorrelation_params(xi):
    '''
    Closed-form parameters of ``equicorrelation_table``: every two-factor
    lambda is log{(1 + 3xi) / (1 - xi)} / 4 and every two-factor eta is
    atanh(xi).
    '''
    if not -1.0 / 3.0 < xi < 1.0:
        raise InfeasibleError('equicorrelation xi must lie in (-1/3, 1), got {!r}'.format(xi))
    return {'lambda': 0.25 * np.log((1.0 + 3.0 * xi) / (1.0 - xi)), 'eta': float(np.arctanh(xi))}


def _deviance(R_hat, R, n):
    sign_hat, logdet_hat = np.linalg.slogdet(R_hat)
    sign, logdet = np.linalg.slogdet(R)
    if sign_hat <= 0 or sign <= 0:
        raise RankError('correlation matrix is not positive definite')
    return n * (logdet_hat - logdet)


def _padded_inverse(R, nodes, d):
    idx = [v - 1 for v in nodes]
    out = np.zeros((d, d))
    out[np.ix_(idx, idx)] = np.linalg.inv(R[np.ix_(idx, idx)])
    return out


def fit_gaussian_decomposable(R, g, n):
    '''
    Maximum-likelihood correlation matrix of a chordal Gaussian concentration
    graph model.  The fitted concentration matrix is

        sum_t [inv(R_C_t)]^0 - sum_t [inv(R_S_t)]^0

    with [.]^0 padding by zeros; clique blocks of R are reproduced exactly.

    Returns
    -------
    (CorrMatrix, float, int)
        Fitted matrix, deviance n log(det R_hat / det R), number of missing
        edges.
    '''
    decomposition = decompose(g)
    if decomposition is None:
        raise NotChordalError('Gaussian fit needs a chordal graph, got {}'.format(sorted(g.edges)))
    if g.d != R.d:
        raise InvalidArgumentError('graph has {} nodes, matrix has {}'.format(g.d, R.d))
    R.check_positive_definite()
    d = R.d
    K = np.zeros((d, d))
    for clique in decomposition.cliques:
        K += _padded_inverse(R.values, clique, d)
    for sep in decomposition.separators:
        if sep:
            K -= _padded_inverse(R.values, sep, d)
    R_hat = np.linalg.inv(K)
    R_hat = (R_hat + R_hat.T) / 2.0
    np.fill_diagonal(R_hat, 1.0)
    R_hat = CorrMatrix(R_hat)
    w = max(_deviance(R_hat.values, R.values, n), 0.0)
    return R_hat, w, len(g.missing_edges())


def fit_equicorrelation(R, block, n):
    '''
    Equicorrelation fit of the variables in ``block``: rho_hat is the mean
    within-block correlation and w = n log(det R_hat / det R) on
    k(k-1)/2 - 1 degrees of freedom.
    '''
    idx = [v - 1 for v in block]
    k = len(idx)
    if k < 3:
        raise InvalidArgumentError('equicorrelation needs at least three variables')
    sub = R.values[np.ix_(idx, idx)]
    rho_hat = float(sub[np.triu_indices(k, 1)].mean())
    if not -1.0 / (k - 1) < rho_hat < 1.0:
        raise InfeasibleError('average correlation {!r} is outside (-1/{}, 1)'.format(rho_hat, k - 1))
    R_hat = np.full((k, k), rho_hat)
    np.fill_diagonal(R_hat, 1.0)
    w = max(_deviance(R_hat, sub, n), 0.0)
    return rho_hat, w, k * (k - 1) // 2 - 1

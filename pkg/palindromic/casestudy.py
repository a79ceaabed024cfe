'''
The grades case study: 78 students, summed grades over three exams in
Analysis, Algebra, Geometry and Physics.

On the Gaussian side the correlations support the concentration graph with
edges 12, 13, 23, 34 (node 3 separates Physics from the first two subjects)
and an equicorrelated block {1, 2, 3}.  On the binary side the same graph
is fitted as a palindromic model to the published table of median-
dichotomized counts; the jittered dichotomization behind that table cannot
be replayed, so the counts are kept as data in `data/casestudy_counts.json`.
'''
import hashlib
import logging
import os
from collections import OrderedDict

from .errors import TableFileError
from .gaussian import (DataMatrix, concentrations, corr_from_data, fit_equicorrelation,
                       fit_gaussian_decomposable, partial_corr, sum_score_correlation)
from .graphs import Graph, fit_decomposable
from .params import CountTable, ProbabilityTable, conditional_probability
from .symmetry import symmetrize, wilks_pvalue

logger = logging.getLogger(__name__)

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')
GRADES_PATH = os.path.join(DATA_DIR, 'grades.csv')
GRADES_SHA256 = 'c42e35b4d0a8db0dfdd568e81a1b2323045bdeeb674d0259aaea660eee1a212b'
COUNTS_PATH = os.path.join(DATA_DIR, 'casestudy_counts.json')

SUBJECTS = ('analysis', 'algebra', 'geometry', 'physics')
CASESTUDY_EDGES = ((1, 2), (1, 3), (2, 3), (3, 4))
EQUICORRELATED_BLOCK = (1, 2, 3)


def casestudy_graph():
    return Graph(4, CASESTUDY_EDGES)


def load_grades(path=GRADES_PATH, sha256=GRADES_SHA256):
    '''
    Read the 78 x 4 grades file, refusing it if its checksum has changed.
    '''
    with open(path, 'rb') as handle:
        digest = hashlib.sha256(handle.read()).hexdigest()
    if sha256 is not None and digest != sha256:
        raise TableFileError('{} has checksum {}, expected {}'.format(path, digest, sha256))
    return DataMatrix.from_csv(path)


def load_grade_counts(path=COUNTS_PATH):
    '''
    Median-dichotomized grades as a 2^4 CountTable, level 0 = at or below the
    median.
    '''
    from .cli import read_table_file

    counts = read_table_file(path)
    if not isinstance(counts, CountTable) or counts.d != 4:
        raise TableFileError('{} must hold counts for the four subjects'.format(path))
    return counts


def _pairs(matrix, upper):
    out = OrderedDict()
    d = matrix.shape[0]
    for i in range(d):
        for j in range(i + 1, d):
            out['{}{}'.format(i + 1, j + 1)] = float(matrix[i, j] if upper else matrix[j, i])
    return out


def gaussian_report(data=None):
    data = load_grades() if data is None else data
    R = corr_from_data(data)
    partial = partial_corr(R)
    R_hat, w_graph, df_graph = fit_gaussian_decomposable(R, casestudy_graph(), data.n)
    rho_hat, w_equi, df_equi = fit_equicorrelation(R, EQUICORRELATED_BLOCK, data.n)
    return OrderedDict([
        ('n', data.n),
        ('correlations', _pairs(R.values, upper=False)),
        ('partial_correlations', _pairs(partial.values, upper=True)),
        ('concentrations', [float(c) for c in concentrations(R)]),
        ('graph_fit', OrderedDict([
            ('fitted', OrderedDict([('14', R_hat[1, 4]), ('24', R_hat[2, 4])])),
            ('w', w_graph), ('df', df_graph), ('pvalue', wilks_pvalue(w_graph, df_graph)),
        ])),
        ('equicorrelation', OrderedDict([
            ('block', list(EQUICORRELATED_BLOCK)), ('rho_hat', rho_hat),
            ('w', w_equi), ('df', df_equi), ('pvalue', wilks_pvalue(w_equi, df_equi)),
        ])),
        ('sum_score_correlation', sum_score_correlation(data, EQUICORRELATED_BLOCK, 4)),
    ])


def binary_report(counts=None):
    counts = load_grade_counts() if counts is None else counts
    sym = symmetrize(counts)
    fit = fit_decomposable(counts, casestudy_graph())
    fitted = ProbabilityTable(fit.p_hat)
    prediction = conditional_probability(fitted, {4: 0}, {3: 0})
    return OrderedDict([
        ('counts', [float(c) for c in counts.counts]),
        ('symmetrized', [float(c) for c in sym.fitted.counts]),
        ('palindromic_test', OrderedDict([
            ('w', sym.wilks), ('df', sym.df), ('pvalue', sym.pvalue),
        ])),
        ('model_fit', OrderedDict([
            ('fitted', [float(c) for c in fit.fitted.counts]),
            ('w_total', fit.wilks_total), ('df_total', fit.df_total),
            ('w_symmetry', fit.wilks_symmetry), ('df_symmetry', fit.df_symmetry),
            ('w_independence', fit.wilks_independence), ('df_independence', fit.df_independence),
            ('pvalue', wilks_pvalue(fit.wilks_total, fit.df_total)),
            ('lambda_hat', OrderedDict((k, fit.lambda_hat[k]) for k in fit.studentized.index)),
            ('studentized', OrderedDict((k, float(v)) for k, v in fit.studentized.items())),
        ])),
        ('p_physics_low_given_geometry_low', prediction),
    ])


def run_casestudy(counts=None, data=None):
    '''
    Both halves of the case study as one nested dictionary.
    '''
    logger.info('running grades case study')
    return OrderedDict([
        ('gaussian', gaussian_report(data)),
        ('binary', binary_report(counts)),
    ])

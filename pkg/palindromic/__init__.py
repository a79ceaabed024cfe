'''
Joint Bernoulli distributions on 2^d cells: log-linear, moment and
multivariate logistic parameters, palindromic (centrally symmetric) tables
and their graphical Markov models, and the median-dichotomized Gaussian
bridge.
'''
from .errors import PalindromicError, InputError, NumericalError  # noqa: F401
from .params import (CountTable, ParamVector, ProbabilityTable,  # noqa: F401
                     LOG_LINEAR, MOMENT, MVLOGISTIC)
from .graphs import Graph  # noqa: F401

__version__ = '0.1.0'

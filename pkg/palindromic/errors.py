'''
Exception hierarchy for the palindromic package.

Errors split into two families.  An InputError means the caller handed over
something malformed (wrong dimension, overlapping sets, an unreadable file);
a NumericalError means the inputs were well formed but the requested object
does not exist or could not be computed (nonpositive cells, a moment vector
outside the moment body, a solver that did not converge).  The command line
front end maps the two families to exit codes 2 and 3.
'''


class PalindromicError(Exception):
    exit_code = 1


class InputError(PalindromicError, ValueError):
    exit_code = 2


class InvalidDimensionError(InputError):
    pass


class InvalidArgumentError(InputError):
    pass


class EmptyDataError(InputError):
    pass


class ParseError(InputError):
    '''
    Malformed text input.  Carries the 1-based line number when known.
    '''
    def __init__(self, message, line=None):
        if line is not None:
            message = 'line {}: {}'.format(line, message)
        super(ParseError, self).__init__(message)
        self.line = line


class TableFileError(InputError):
    pass


class NumericalError(PalindromicError, ArithmeticError):
    exit_code = 3


class DomainError(NumericalError):
    pass


class RangeError(NumericalError):
    pass


class InfeasibleError(NumericalError):
    pass


class InfeasibleMomentError(InfeasibleError):
    pass


class InfeasibleCoefficientsError(InfeasibleError):
    pass


class IncompatibleError(NumericalError):
    '''
    Raised when the eta solver cannot find a table with the requested
    multivariate logistic parameters.  ``residual`` is the smallest sup-norm
    residual seen during the iteration.
    '''
    def __init__(self, message, residual=None, iterations=None):
        super(IncompatibleError, self).__init__(message)
        self.residual = residual
        self.iterations = iterations


class ConvergenceError(NumericalError):
    def __init__(self, message, deviation=None, iterations=None):
        super(ConvergenceError, self).__init__(message)
        self.deviation = deviation
        self.iterations = iterations


class RankError(NumericalError):
    pass


class DegenerateFitError(NumericalError):
    pass


class DegenerateVarianceError(NumericalError):
    pass


class NotChordalError(NumericalError):
    pass

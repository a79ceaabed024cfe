'''
The three parameterizations of a joint Bernoulli distribution and the
conversions among them.

    lambda  log-linear parameters, lambda = H^-1 log(pi)
    xi      moment (linear) parameters, xi = H pi
    eta     multivariate logistic parameters; eta_b is the top-order
            log-linear parameter of the margin on b

pi -> lambda, pi -> xi and pi -> eta are explicit.  The way back from eta is
explicit only for d <= 2; for larger d it is found by a damped Newton
iteration in lambda-space, and a failure to converge is reported as an
incompatible eta.
'''
import logging

import numpy as np
import pandas as pd
from scipy.special import expit

from . import parameters
from .errors import (DomainError, EmptyDataError, IncompatibleError, InfeasibleMomentError,
                     InvalidArgumentError, RangeError)
from .tensor import (as_vector, cardinalities, dim_of, embed_masks, marginal_sum, mask_nodes,
                     n_cells, parity_signs, parse_subset_key, subset_key, subset_mask,
                     hadamard_apply, hadamard_inverse_apply)

logger = logging.getLogger(__name__)

LOG_LINEAR = 'lambda'
MOMENT = 'xi'
MVLOGISTIC = 'eta'
KINDS = (LOG_LINEAR, MOMENT, MVLOGISTIC)


class ProbabilityTable(object):
    '''
    A strictly positive joint Bernoulli distribution on 2^d cells.

    Any nonnegative vector is accepted and renormalized to sum 1; cells
    whose normalized probability falls below ``floor`` are rejected.
    '''
    def __init__(self, pi, floor=None):
        pi = as_vector(pi)
        floor = parameters.prob_floor if floor is None else floor
        if not np.all(np.isfinite(pi)):
            raise DomainError('cell probabilities must be finite')
        total = pi.sum()
        if total <= 0:
            raise DomainError('cell probabilities must have a positive total')
        if abs(total - 1.0) > parameters.sum_tol:
            logger.debug('renormalizing table with total %r', total)
        pi = pi / total
        low = int(np.argmin(pi))
        if pi[low] < floor:
            raise DomainError(
                'cell {} has probability {!r}, below the floor {!r}'.format(low, pi[low], floor))
        pi.setflags(write=False)
        self.pi = pi
        self.d = dim_of(pi)

    @classmethod
    def uniform(cls, d):
        return cls(np.ones(n_cells(d)))

    def __len__(self):
        return self.pi.size

    def __eq__(self, other):
        return isinstance(other, ProbabilityTable) and np.array_equal(self.pi, other.pi)

    def __repr__(self):
        return 'ProbabilityTable(d={}, pi={})'.format(self.d, np.array2string(self.pi, precision=4))


class CountTable(object):
    '''
    Nonnegative cell counts.  Fitted tables carry fractional counts.
    '''
    def __init__(self, counts):
        counts = as_vector(counts)
        if not np.all(np.isfinite(counts)) or np.any(counts < 0):
            raise InvalidArgumentError('counts must be finite and nonnegative')
        counts.setflags(write=False)
        self.counts = counts
        self.d = dim_of(counts)

    @property
    def n(self):
        return float(self.counts.sum())

    def proportions(self):
        if self.n <= 0:
            raise EmptyDataError('count table is empty')
        return self.counts / self.n

    def to_table(self, floor=None):
        return ProbabilityTable(self.proportions(), floor=floor)

    def __len__(self):
        return self.counts.size

    def __repr__(self):
        return 'CountTable(d={}, n={:g}, counts={})'.format(
            self.d, self.n, np.array2string(self.counts, precision=2))


class ParamVector(object):
    '''
    Interaction parameters indexed by subsets b of V, tagged with their kind.

    Entries can be read by subset mask, by a tuple of 1-based nodes or by a
    subset key string: ``p[3]``, ``p[(1, 2)]`` and ``p['12']`` are the same.
    '''
    def __init__(self, kind, values):
        if kind not in KINDS:
            raise InvalidArgumentError('unknown parameter kind {!r}'.format(kind))
        values = as_vector(values)
        if not np.all(np.isfinite(values)):
            raise DomainError('{} parameters must be finite'.format(kind))
        if kind == MOMENT:
            if abs(values[0] - 1.0) > parameters.sum_tol:
                raise InfeasibleMomentError('xi_{{}} must equal 1, got {!r}'.format(values[0]))
            worst = int(np.argmax(np.abs(values)))
            if abs(values[worst]) > 1.0 + 1e-12:
                raise InfeasibleMomentError('xi_{} = {!r} lies outside [-1, 1]'.format(
                    subset_key(worst, dim_of(values)), values[worst]))
            values[0] = 1.0
            values = np.clip(values, -1.0, 1.0)
        values.setflags(write=False)
        self.kind = kind
        self.values = values
        self.d = dim_of(values)

    def _mask(self, key):
        if isinstance(key, str):
            return parse_subset_key(key, self.d)
        return subset_mask(key, self.d)

    def __getitem__(self, key):
        return float(self.values[self._mask(key)])

    def __len__(self):
        return self.values.size

    def keys(self):
        return [subset_key(b, self.d) for b in range(self.values.size)]

    def as_dict(self):
        return dict(zip(self.keys(), (float(v) for v in self.values)))

    def to_series(self):
        return pd.Series(self.values, index=self.keys(), name=self.kind)

    @classmethod
    def from_dict(cls, kind, d, values):
        out = np.zeros(n_cells(d))
        if kind == MOMENT:
            out[0] = 1.0
        for key, value in values.items():
            out[parse_subset_key(key, d)] = float(value)
        return cls(kind, out)

    def __repr__(self):
        return 'ParamVector({}, d={}, values={})'.format(
            self.kind, self.d, np.array2string(self.values, precision=4))


def _require_kind(p, kind):
    if not isinstance(p, ParamVector) or p.kind != kind:
        raise InvalidArgumentError('expected {} parameters, got {!r}'.format(kind, p))


def lambda_from_pi(t):
    if np.any(t.pi <= 0):
        raise DomainError('log-linear parameters need strictly positive cells')
    return ParamVector(LOG_LINEAR, hadamard_inverse_apply(np.log(t.pi)))


def pi_from_lambda(p):
    '''
    pi = exp(H lambda), renormalized.  The supplied lambda_{} is ignored and
    replaced by the normalizing constant.
    '''
    _require_kind(p, LOG_LINEAR)
    lam = np.array(p.values)
    lam[0] = 0.0
    log_pi = hadamard_apply(lam)
    if not np.all(np.isfinite(log_pi)):
        raise RangeError('log-linear parameters overflow')
    log_pi -= log_pi.max()
    pi = np.exp(log_pi)
    pi /= pi.sum()
    if pi.min() < parameters.prob_floor:
        raise RangeError('log-linear parameters too extreme: smallest cell {!r} underflows '
                         'the floor {!r}'.format(pi.min(), parameters.prob_floor))
    return ProbabilityTable(pi)


def xi_from_pi(t):
    return ParamVector(MOMENT, hadamard_apply(t.pi))


def pi_from_xi(p):
    _require_kind(p, MOMENT)
    pi = hadamard_inverse_apply(p.values)
    low = int(np.argmin(pi))
    if pi[low] <= parameters.prob_floor:
        raise InfeasibleMomentError(
            'moment vector outside the moment body: cell {} gets probability {!r}'.format(
                low, pi[low]))
    return ProbabilityTable(pi)


def marginal_table(t, M):
    mask = subset_mask(M, t.d)
    if mask == 0:
        raise InvalidArgumentError('marginal over the empty set')
    return ProbabilityTable(marginal_sum(t.pi, mask, t.d))


def _top_lambda(margin):
    '''
    Highest-order effect-coded log-linear parameter of a table.
    '''
    k = dim_of(margin)
    return float(np.dot(parity_signs(k), np.log(margin))) / margin.size


def _eta_values(pi, d):
    eta = np.empty(pi.size)
    eta[0] = np.mean(np.log(pi))
    for b in range(1, pi.size):
        eta[b] = _top_lambda(marginal_sum(pi, b, d))
    return eta


def eta_from_pi(t):
    '''
    eta_b = top-order log-linear parameter of the margin on b.  eta_{} holds
    the joint lambda_{} and is never compared.
    '''
    if np.any(t.pi <= 0):
        raise DomainError('multivariate logistic parameters need strictly positive cells')
    return ParamVector(MVLOGISTIC, _eta_values(t.pi, t.d))


def stepwise_schedule(d):
    '''
    Order in which the T_M steps replace moments by eta: M = V first, then
    by decreasing cardinality and, within a cardinality, decreasing mask.
    For d = 3 this is 123, 23, 13, 12, 3, 2, 1.
    '''
    sizes = cardinalities(d)
    masks = range(1, n_cells(d))
    return sorted(masks, key=lambda b: (-sizes[b], -b))


def eta_via_stepwise(p):
    '''
    eta from lambda through the chain of mixed parameterizations.

    T_V turns lambda into (xi_b for b != V, lambda_V), and lambda_V already
    equals eta_V.  Each later T_M rebuilds the margin on M from the moments
    xi_b, b subset of M, still held in the mixed vector and swaps xi_M for
    that margin's top-order log-linear parameter.
    '''
    _require_kind(p, LOG_LINEAR)
    t = pi_from_lambda(p)
    d = t.d
    full = n_cells(d) - 1
    mixed = hadamard_apply(t.pi)
    mixed[0] = 1.0
    lam = hadamard_inverse_apply(np.log(t.pi))
    mixed[full] = lam[full]
    for M in stepwise_schedule(d)[1:]:
        local = embed_masks(M)
        if local.size == 2:
            mixed[M] = np.arctanh(mixed[M])
            continue
        margin = hadamard_inverse_apply(mixed[local])
        mixed[M] = _top_lambda(margin)
    mixed[0] = lam[0]
    return ParamVector(MVLOGISTIC, mixed)


def _pi_from_eta_closed(eta, d):
    if d == 1:
        p0 = expit(2.0 * eta[1])
        return np.array([p0, 1.0 - p0])
    a = expit(2.0 * eta[1])
    b = expit(2.0 * eta[2])
    psi = np.exp(4.0 * eta[3])
    if not np.isfinite(psi):
        raise RangeError('eta_12 = {!r} overflows the odds-ratio'.format(eta[3]))
    if abs(psi - 1.0) < 1e-12:
        x = a * b
    else:
        s = 1.0 + (psi - 1.0) * (a + b)
        x = (s - np.sqrt(s * s - 4.0 * psi * (psi - 1.0) * a * b)) / (2.0 * (psi - 1.0))
    return np.array([x, b - x, a - x, 1.0 - a - b + x])


def eta_jacobian(lam, fd_step=None, central=False):
    '''
    Finite-difference Jacobian of lambda -> eta over the non-constant
    coordinates, as a (2^d - 1) x (2^d - 1) matrix.
    '''
    lam = as_vector(lam)
    d = dim_of(lam)
    step = parameters.init_eta_solver['fd_step'] if fd_step is None else fd_step

    def eta_of(x):
        return _eta_values(pi_from_lambda(ParamVector(LOG_LINEAR, x)).pi, d)[1:]

    base = None if central else eta_of(lam)
    jac = np.empty((lam.size - 1, lam.size - 1))
    for j in range(1, lam.size):
        up = lam.copy()
        up[j] += step
        if central:
            down = lam.copy()
            down[j] -= step
            jac[:, j - 1] = (eta_of(up) - eta_of(down)) / (2.0 * step)
        else:
            jac[:, j - 1] = (eta_of(up) - base) / step
    return jac


def pi_from_eta(p, opts=None, **kwds):
    '''
    Invert the multivariate logistic map.

    Closed forms are used for d = 1 and d = 2 (the latter is Plackett's
    solution of the 2x2 table with given margins and odds-ratio).  For
    d >= 3 a damped Newton iteration runs on lambda, starting from
    lambda = eta, with a finite-difference Jacobian.

    Parameters
    ----------
    p : ParamVector
        Multivariate logistic parameters; eta_{} is ignored.
    opts : dict, optional
        Overrides for ``parameters.init_eta_solver`` (tol, max_iter,
        fd_step, central, min_damping).

    Returns
    -------
    ProbabilityTable

    Raises
    ------
    IncompatibleError
        When no table reproduces eta to within ``tol``; carries the best
        residual reached.
    '''
    _require_kind(p, MVLOGISTIC)
    opts = parameters.merge_opts(parameters.init_eta_solver, opts, **kwds)
    eta = np.array(p.values)
    d = p.d
    if d <= 2:
        pi = _pi_from_eta_closed(eta, d)
        if pi.min() <= 0 or not np.all(np.isfinite(pi)):
            raise RangeError('eta too extreme for a strictly positive table')
        return ProbabilityTable(pi)

    def residual(lam):
        t = pi_from_lambda(ParamVector(LOG_LINEAR, lam))
        return _eta_values(t.pi, d)[1:] - eta[1:]

    lam = eta.copy()
    lam[0] = 0.0
    try:
        res = residual(lam)
    except RangeError:
        raise IncompatibleError('eta is too extreme to start the solver', residual=np.inf)
    err = np.max(np.abs(res))
    best = err
    for it in range(opts['max_iter']):
        if err <= opts['tol']:
            logger.debug('eta solver converged in %d iterations, residual %.3e', it, err)
            return pi_from_lambda(ParamVector(LOG_LINEAR, lam))
        try:
            jac = eta_jacobian(lam, opts['fd_step'], opts['central'])
        except RangeError:
            break
        try:
            delta = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError:
            delta = np.linalg.lstsq(jac, -res, rcond=None)[0]
        step = 1.0
        while step >= opts['min_damping']:
            trial = lam.copy()
            trial[1:] += step * delta
            try:
                trial_res = residual(trial)
            except RangeError:
                trial_res = None
            if trial_res is not None and np.max(np.abs(trial_res)) < err:
                break
            step *= 0.5
        else:
            break
        lam, res = trial, trial_res
        err = np.max(np.abs(res))
        best = min(best, err)
        logger.debug('eta solver iteration %d: residual %.3e, step %g', it + 1, err, step)
    if err <= opts['tol']:
        return pi_from_lambda(ParamVector(LOG_LINEAR, lam))
    raise IncompatibleError(
        'eta is not compatible with any strictly positive table '
        '(best residual {:.3e})'.format(best), residual=best)


def conditional_probability(t, event, given=None):
    '''
    P(event | given) where both are dictionaries {node: level}.
    '''
    given = given or {}
    both = dict(given)
    for v, level in event.items():
        if v in given and given[v] != level:
            return 0.0
        both[v] = level

    def prob(assignment):
        mask = subset_mask(list(assignment), t.d)
        margin = marginal_sum(t.pi, mask, t.d)
        cell = 0
        for i, v in enumerate(mask_nodes(mask)):
            level = assignment[v]
            if level not in (0, 1):
                raise InvalidArgumentError('level of node {} must be 0 or 1'.format(v))
            cell |= level << i
        return margin[cell]

    if not both:
        return 1.0
    denom = prob(given) if given else 1.0
    return float(prob(both) / denom)


def random_lambda(d, rng, scale=1.0, palindromic=False, max_order=None):
    '''
    Log-linear parameters with entries uniform on [-scale, scale], optionally
    with the odd-order entries (palindromic) or all entries above
    ``max_order`` set to zero.  lambda_{} is the normalizing constant.
    '''
    rng = np.random.default_rng(rng)
    lam = rng.uniform(-scale, scale, size=n_cells(d))
    sizes = cardinalities(d)
    if palindromic:
        lam[sizes % 2 == 1] = 0.0
    if max_order is not None:
        lam[sizes > max_order] = 0.0
    lam[0] = 0.0
    pi = pi_from_lambda(ParamVector(LOG_LINEAR, lam)).pi
    lam[0] = np.mean(np.log(pi))
    return ParamVector(LOG_LINEAR, lam)

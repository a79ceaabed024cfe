'''
Concentration-graph Markov models for palindromic tables.

A graph on nodes 1..d specifies a log-linear model in which lambda_b = 0
unless b is complete in the graph.  Intersected with the palindromic family
(every odd-order lambda zero) the free parameters are the even-order
complete subsets.  Such a model is fitted to the symmetrized counts: in
closed form by clique and separator margins when the graph is chordal, by
iterative proportional fitting otherwise, or by Newton-Raphson on the free
lambda straight from the raw counts.
'''
import json
import logging

import networkx as nx
import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from . import parameters
from .errors import (ConvergenceError, DegenerateFitError, InvalidArgumentError,
                     NotChordalError, RankError)
from .params import CountTable, ProbabilityTable, lambda_from_pi
from .symmetry import is_palindromic, symmetrize, wilks_palindromic
from .tensor import (cardinalities, cell_bits, expand_marginal, hadamard_apply, mask_nodes,
                     marginal_sum, n_cells, subset_key, subset_mask)
from .util import log_progress

logger = logging.getLogger(__name__)


class Graph(object):
    '''
    Undirected graph on nodes 1..d, stored as a frozenset of (i, j), i < j.
    '''
    def __init__(self, d, edges=()):
        self.d = int(d)
        if self.d < 1:
            raise InvalidArgumentError('graph needs at least one node')
        cleaned = set()
        for edge in edges:
            i, j = (int(v) for v in edge)
            if i == j:
                raise InvalidArgumentError('self-loop at node {}'.format(i))
            if not (1 <= i <= self.d and 1 <= j <= self.d):
                raise InvalidArgumentError('edge ({}, {}) outside nodes 1..{}'.format(i, j, self.d))
            cleaned.add((min(i, j), max(i, j)))
        self.edges = frozenset(cleaned)

    @classmethod
    def complete(cls, d):
        return cls(d, [(i, j) for i in range(1, d + 1) for j in range(i + 1, d + 1)])

    @classmethod
    def from_json(cls, source):
        data = json.loads(source) if isinstance(source, str) else source
        try:
            return cls(data['d'], data.get('edges', []))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidArgumentError('malformed graph: {}'.format(exc))

    def to_json(self):
        return {'d': self.d, 'edges': [list(e) for e in sorted(self.edges)]}

    def to_networkx(self):
        g = nx.Graph()
        g.add_nodes_from(range(1, self.d + 1))
        g.add_edges_from(self.edges)
        return g

    def has_edge(self, i, j):
        return (min(i, j), max(i, j)) in self.edges

    def neighbours(self, v):
        return {j for e in self.edges for j in e if v in e and j != v}

    def is_complete(self, nodes):
        nodes = sorted(nodes)
        return all(self.has_edge(i, j) for k, i in enumerate(nodes) for j in nodes[k + 1:])

    def missing_edges(self):
        return [(i, j) for i in range(1, self.d + 1) for j in range(i + 1, self.d + 1)
                if not self.has_edge(i, j)]

    def __eq__(self, other):
        return isinstance(other, Graph) and (self.d, self.edges) == (other.d, other.edges)

    def __repr__(self):
        return 'Graph(d={}, edges={})'.format(self.d, sorted(self.edges))


class CliqueDecomposition(object):
    '''
    Cliques in an order with the running intersection property, and the
    separators S_t = C_{t+1} & (C_1 | ... | C_t).
    '''
    def __init__(self, cliques, separators):
        self.cliques = cliques
        self.separators = separators

    def __repr__(self):
        return 'CliqueDecomposition(cliques={}, separators={})'.format(self.cliques, self.separators)


class ModelFit(object):
    '''
    A palindromic graphical model fitted to a count table.

    ``lambda_hat``, ``se_lambda`` and ``studentized`` are None when the
    fitted table has empty cells.  The last two are pandas Series indexed
    by subset key over the free even-order subsets.
    '''
    def __init__(self, fitted, generators, method, wilks_total, wilks_symmetry,
                 wilks_independence, df_total, df_symmetry, df_independence,
                 lambda_hat=None, se_lambda=None, studentized=None, iterations=0):
        self.fitted = fitted
        self.generators = generators
        self.method = method
        self.wilks_total = wilks_total
        self.wilks_symmetry = wilks_symmetry
        self.wilks_independence = wilks_independence
        self.df_total = df_total
        self.df_symmetry = df_symmetry
        self.df_independence = df_independence
        self.lambda_hat = lambda_hat
        self.se_lambda = se_lambda
        self.studentized = studentized
        self.iterations = iterations

    @property
    def p_hat(self):
        return self.fitted.proportions()

    def __repr__(self):
        return 'ModelFit({}, w={:.4f} on {} df = {:.4f} + {:.4f})'.format(
            self.method, self.wilks_total, self.df_total,
            self.wilks_symmetry, self.wilks_independence)


# -----------------------------------------------------------------------------
# --- Graph structure ---------------------------------------------------------
# -----------------------------------------------------------------------------

def cliques(g):
    found = [tuple(sorted(c)) for c in nx.find_cliques(g.to_networkx())]
    return sorted(found)


def _mcs_order(g):
    '''
    Maximum cardinality search; ties go to the smallest label.
    '''
    weight = {v: 0 for v in range(1, g.d + 1)}
    order = []
    while weight:
        v = max(sorted(weight), key=lambda u: weight[u])
        order.append(v)
        del weight[v]
        for u in g.neighbours(v):
            if u in weight:
                weight[u] += 1
    return order


def decompose(g):
    '''
    Clique ordering with the running intersection property, or None when the
    graph is not chordal.
    '''
    order = _mcs_order(g)
    seen = []
    candidates = []
    for v in order:
        earlier = g.neighbours(v) & set(seen)
        if not g.is_complete(earlier):
            return None
        candidates.append(frozenset(earlier | {v}))
        seen.append(v)
    maximal = []
    for k, c in enumerate(candidates):
        if any(c < other for other in candidates[k + 1:]):
            continue
        if c not in maximal:
            maximal.append(c)
    ordered = [tuple(sorted(c)) for c in maximal]
    separators = []
    covered = set(ordered[0])
    for c in ordered[1:]:
        separators.append(tuple(sorted(covered & set(c))))
        covered |= set(c)
    return CliqueDecomposition(ordered, separators)


def is_chordal(g):
    return decompose(g) is not None


def _generator_masks(generators, d):
    masks = [subset_mask(gen, d) for gen in generators]
    covered = 0
    for m in masks:
        covered |= m
    if covered != n_cells(d) - 1:
        raise InvalidArgumentError('generators do not cover all {} nodes'.format(d))
    return masks


def free_subsets(generators, d):
    '''
    Even-order subsets b, |b| >= 2, contained in some generator: the free
    log-linear parameters of the palindromic hierarchical model.
    '''
    masks = _generator_masks(generators, d)
    sizes = cardinalities(d)
    return [b for b in range(1, n_cells(d))
            if sizes[b] % 2 == 0 and any(b & m == b for m in masks)]


def model_df_generators(generators, d):
    df_symmetry = 1 << (d - 1)
    n_even = (1 << (d - 1)) - 1
    df_independence = n_even - len(free_subsets(generators, d))
    return df_symmetry, df_independence, df_symmetry + df_independence


def model_df(g, d=None):
    d = g.d if d is None else d
    return model_df_generators(cliques(g), d)


# -----------------------------------------------------------------------------
# --- Fitting -----------------------------------------------------------------
# -----------------------------------------------------------------------------

def _as_counts(c):
    return c if isinstance(c, CountTable) else CountTable(c)


def _information(pi, free, n):
    '''
    Fisher information of the free lambda at cell probabilities pi:
    n (xi_{b ^ c} - xi_b xi_c).
    '''
    xi = hadamard_apply(pi)
    free = np.asarray(free, dtype=int)
    return n * (xi[free[:, None] ^ free[None, :]] - np.outer(xi[free], xi[free]))


def _studentize(m, n, free, d):
    if np.any(m <= 0):
        logger.warning('fitted table has empty cells; lambda_hat is not defined')
        return None, None, None
    p = m / n
    lam = lambda_from_pi(ProbabilityTable(p))
    keys = [subset_key(b, d) for b in free]
    if not free:
        empty = pd.Series([], index=[], dtype=float)
        return lam, empty, empty.copy()
    info = _information(p, free, n)
    if not np.all(np.isfinite(info)) or np.linalg.cond(info) > parameters.rank_cond_max:
        raise RankError('Fisher information of the free interactions is singular')
    cov = np.linalg.inv(info)
    se = np.sqrt(np.diag(cov))
    se_lambda = pd.Series(se, index=keys, name='se')
    studentized = pd.Series(lam.values[free] / se, index=keys, name='studentized')
    return lam, se_lambda, studentized


def _finish_fit(c, m, generators, method, iterations=0):
    d = c.d
    m = (m + m[::-1]) / 2.0
    n = c.counts
    n_hat = (n + n[::-1]) / 2.0
    if np.any((m <= 0) & (n > 0)):
        raise DegenerateFitError('fitted count is zero where a count was observed')
    pos = n > 0
    w_total = 2.0 * float(np.sum(n[pos] * np.log(n[pos] / m[pos])))
    w_symmetry, _ = wilks_palindromic(c)
    pos = n_hat > 0
    w_independence = 2.0 * float(np.sum(n_hat[pos] * np.log(n_hat[pos] / m[pos])))
    df_symmetry, df_independence, df_total = model_df_generators(generators, d)
    free = free_subsets(generators, d)
    lam, se, studentized = _studentize(m, c.n, free, d)
    return ModelFit(CountTable(m), [tuple(mask_nodes(subset_mask(gen, d))) for gen in generators],
                    method, w_total, w_symmetry, w_independence,
                    df_total, df_symmetry, df_independence,
                    lambda_hat=lam, se_lambda=se, studentized=studentized,
                    iterations=iterations)


def _ratio(num, den):
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den > 0)
    return out


def fit_decomposable(c, g):
    '''
    Closed-form fit of a chordal palindromic graphical model:

        m(a) = n prod_t p_C_t(a) / prod_t p_S_t(a)

    with the clique and separator margins taken from the symmetrized counts.
    '''
    c = _as_counts(c)
    decomposition = decompose(g)
    if decomposition is None:
        raise NotChordalError('graph {} is not chordal; use fit_ipf'.format(sorted(g.edges)))
    d = c.d
    p_sym = symmetrize(c).fitted.counts / c.n
    q = np.ones(n_cells(d))
    for clique in decomposition.cliques:
        mask = subset_mask(clique, d)
        q *= expand_marginal(marginal_sum(p_sym, mask, d), mask, d)
    for sep in decomposition.separators:
        if not sep:
            continue
        mask = subset_mask(sep, d)
        q = _ratio(q, expand_marginal(marginal_sum(p_sym, mask, d), mask, d))
    return _finish_fit(c, c.n * q, decomposition.cliques, 'decomposable')


def fit_ipf(c, generators, tol=None, max_iter=None):
    '''
    Iterative proportional fitting of the hierarchical model with the given
    generating class to the symmetrized counts.

    Starts from the uniform table and cycles through the generators,
    rescaling each generator margin to its symmetrized target.  Convergence
    is the sup-norm deviation of all generator margins, measured on the
    proportion scale.
    '''
    c = _as_counts(c)
    opts = parameters.merge_opts(parameters.init_ipf, tol=tol, max_iter=max_iter)
    d = c.d
    masks = _generator_masks(generators, d)
    p_sym = symmetrize(c).fitted.counts / c.n
    targets = [marginal_sum(p_sym, m, d) for m in masks]
    q = np.full(n_cells(d), 1.0 / n_cells(d))
    deviation = np.inf
    for it in range(opts['max_iter'] + 1):
        deviation = max(np.max(np.abs(marginal_sum(q, m, d) - t)) for m, t in zip(masks, targets))
        if deviation <= opts['tol']:
            logger.debug('IPF converged after %d cycles, deviation %.3e', it, deviation)
            return _finish_fit(c, c.n * q, generators, 'ipf', iterations=it)
        if it == opts['max_iter']:
            break
        for m, t in zip(masks, targets):
            q *= expand_marginal(_ratio(t, marginal_sum(q, m, d)), m, d)
    raise ConvergenceError(
        'IPF did not converge in {} cycles; max marginal deviation {:.3e}'.format(
            opts['max_iter'], deviation), deviation=deviation, iterations=opts['max_iter'])


def fit_newton(c, generators, opts=None, **kwds):
    '''
    Newton-Raphson fit of the palindromic hierarchical model on the raw
    counts.  Only the even-order lambda inside the generators are free; the
    score is n (xi_observed - xi_model) on those coordinates.
    '''
    c = _as_counts(c)
    opts = parameters.merge_opts(parameters.init_newton_fit, opts, **kwds)
    d = c.d
    free = free_subsets(generators, d)
    n = c.n
    observed = hadamard_apply(c.counts) / n
    lam = np.zeros(n_cells(d))

    def probabilities(lam):
        log_p = hadamard_apply(lam)
        log_p -= log_p.max()
        p = np.exp(log_p)
        return p / p.sum()

    def loglik(p):
        pos = c.counts > 0
        return float(np.sum(c.counts[pos] * np.log(p[pos])))

    p = probabilities(lam)
    for it in range(opts['max_iter'] + 1):
        if not free:
            break
        xi = hadamard_apply(p)
        score = observed[free] - xi[free]
        if np.max(np.abs(score)) <= opts['tol']:
            logger.debug('Newton fit converged after %d iterations', it)
            break
        if it == opts['max_iter']:
            raise ConvergenceError(
                'Newton fit did not converge in {} iterations; max score {:.3e}'.format(
                    opts['max_iter'], np.max(np.abs(score))),
                deviation=float(np.max(np.abs(score))), iterations=it)
        info = _information(p, free, 1.0)
        try:
            delta = np.linalg.solve(info, score)
        except np.linalg.LinAlgError:
            raise RankError('Fisher information of the free interactions is singular')
        base = loglik(p)
        step = 1.0
        while True:
            trial = lam.copy()
            trial[free] += step * delta
            trial_p = probabilities(trial)
            if loglik(trial_p) >= base - 1e-12 * abs(base) or step < 1e-8:
                break
            step *= 0.5
        lam, p = trial, trial_p
    return _finish_fit(c, n * p, generators, 'newton', iterations=it)


def fit_model(c, g, method='auto', tol=None, max_iter=None):
    '''
    Fit graph ``g``: closed form when chordal and ``method`` allows it,
    otherwise IPF on the cliques.
    '''
    if method not in ('auto', 'decomposable', 'ipf', 'newton'):
        raise InvalidArgumentError('unknown fitting method {!r}'.format(method))
    if method == 'decomposable' or (method == 'auto' and is_chordal(g)):
        return fit_decomposable(c, g)
    if method == 'auto':
        logger.warning('graph is not chordal; fitting by IPF')
    if method == 'newton':
        return fit_newton(c, cliques(g), tol=tol, max_iter=max_iter)
    return fit_ipf(c, cliques(g), tol=tol, max_iter=max_iter)


def wilks_model(c, fit):
    c = _as_counts(c)
    n = c.counts
    m = fit.fitted.counts
    if np.any((m <= 0) & (n > 0)):
        raise DegenerateFitError('fitted count is zero where a count was observed')
    pos = n > 0
    w = 2.0 * float(np.sum(n[pos] * np.log(n[pos] / m[pos])))
    return w, model_df_generators(fit.generators, c.d)[2]


def studentized_lambda(c, fit):
    c = _as_counts(c)
    m = fit.fitted.counts
    if np.any(m <= 0):
        raise RankError('fitted table has empty cells; the information is singular')
    free = free_subsets(fit.generators, c.d)
    return _studentize(m, c.n, free, c.d)[2]


def simulate_studentized(t, generators, n, reps, seed=0, n_jobs=1):
    '''
    Studentized interactions of ``reps`` samples of size ``n`` drawn from
    table ``t`` and fitted with ``generators``.  Returns a DataFrame with
    one row per replication.
    '''
    seeds = np.random.SeedSequence(seed).spawn(reps)

    def one(s):
        counts = np.random.default_rng(s).multinomial(n, t.pi)
        return fit_ipf(counts.astype(float), generators).studentized

    rows = Parallel(n_jobs=n_jobs)(
        delayed(one)(s) for s in log_progress(seeds, name='Replications'))
    return pd.DataFrame(rows).reset_index(drop=True)


# -----------------------------------------------------------------------------
# --- Conditional independence and Ising predicates ---------------------------
# -----------------------------------------------------------------------------

def _stratified(t, blocks):
    '''
    Joint margin of disjoint node blocks as an array with one axis per block,
    each axis in the first-index-fastest order of its block.
    '''
    d = t.d
    nodes = [v for block in blocks for v in block]
    cube = np.reshape(t.pi, (2,) * d, order='F')
    drop = tuple(i for i in range(d) if i + 1 not in nodes)
    if drop:
        cube = cube.sum(axis=drop)
    kept = [i + 1 for i in range(d) if i + 1 in nodes]
    cube = np.transpose(cube, [kept.index(v) for v in nodes])
    shape = [1 << len(block) for block in blocks]
    return np.reshape(cube, shape, order='F')


def _node_sets(d, *sets):
    out = []
    for s in sets:
        s = tuple(sorted(int(v) for v in s))
        if any(v < 1 or v > d for v in s):
            raise InvalidArgumentError('node outside 1..{} in {}'.format(d, s))
        out.append(s)
    flat = [v for s in out for v in s]
    if len(flat) != len(set(flat)):
        raise InvalidArgumentError('node sets must be disjoint: {}'.format(out))
    return out


def check_ci(t, A, B, C=(), tol=None):
    '''
    True iff A and B are conditionally independent given C: in every stratum
    of C, |p(ab|c) - p(a|c) p(b|c)| <= tol.
    '''
    tol = parameters.exact_tol if tol is None else tol
    A, B, C = _node_sets(t.d, A, B, C)
    if not A or not B:
        raise InvalidArgumentError('A and B must be nonempty')
    joint = _stratified(t, [A, B, C]) if C else _stratified(t, [A, B])[:, :, None]
    strata = joint.sum(axis=(0, 1))
    cond = joint / strata[None, None, :]
    pa = cond.sum(axis=1)
    pb = cond.sum(axis=0)
    deviation = np.max(np.abs(cond - pa[:, None, :] * pb[None, :, :]))
    return bool(deviation <= tol)


def conditional_correlation(t, i, j, given=()):
    '''
    Correlation of the +-1 coded variables i and j within each stratum of
    ``given``, in the first-index-fastest order of the strata.
    '''
    A, B, C = _node_sets(t.d, [i], [j], given)
    joint = _stratified(t, [A, B, C]) if C else _stratified(t, [A, B])[:, :, None]
    cond = joint / joint.sum(axis=(0, 1))[None, None, :]
    coded = np.array([1.0, -1.0])
    e_ij = np.einsum('i,j,ijc->c', coded, coded, cond)
    e_i = np.einsum('i,ijc->c', coded, cond)
    e_j = np.einsum('j,ijc->c', coded, cond)
    return (e_ij - e_i * e_j) / np.sqrt((1.0 - e_i ** 2) * (1.0 - e_j ** 2))


def conditional_log_odds_ratio(t, i, j, given=()):
    A, B, C = _node_sets(t.d, [i], [j], given)
    joint = _stratified(t, [A, B, C]) if C else _stratified(t, [A, B])[:, :, None]
    return np.log(joint[0, 0] * joint[1, 1] / (joint[0, 1] * joint[1, 0]))


def is_palindromic_ising(t, tol=None):
    tol = parameters.exact_tol if tol is None else tol
    if not is_palindromic(t, tol):
        return False
    lam = lambda_from_pi(t).values
    high = cardinalities(t.d) >= 3
    return bool(not np.any(high) or np.max(np.abs(lam[high])) <= tol)


def ising_table(d, interactions):
    '''
    Palindromic Ising table with two-factor log-linear interactions given as
    {(i, j): lambda_ij}.
    '''
    lam = np.zeros(n_cells(d))
    for (i, j), value in interactions.items():
        lam[subset_mask((i, j), d)] = value
    signs = 1.0 - 2.0 * cell_bits(d)
    log_p = np.zeros(n_cells(d))
    for b in np.flatnonzero(lam):
        nodes = [v - 1 for v in mask_nodes(int(b))]
        log_p += lam[b] * np.prod(signs[:, nodes], axis=1)
    log_p -= log_p.max()
    return ProbabilityTable(np.exp(log_p))

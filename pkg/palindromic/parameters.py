'''
Default numerical settings.  Solvers copy the relevant dictionary and update
the copy with whatever options the caller passes, so the module-level values
are never mutated.
'''
from copy import copy

# -----------------------------------------------------------------------------
# --- Tables and exactness predicates -----------------------------------------
# -----------------------------------------------------------------------------
prob_floor = 1e-12           # Smallest cell probability accepted in a table
sum_tol = 1e-9               # Allowed deviation of a table total from 1 before renormalizing
exact_tol = 1e-9             # Default tolerance for palindromic, CI and Ising predicates
max_dim = 24                 # Largest number of binary variables held densely
cell_order = 'lex-first-fastest'  # Tag written on every serialized table

# -----------------------------------------------------------------------------
# --- Continuous side ---------------------------------------------------------
# -----------------------------------------------------------------------------
jitter_scale = 1e-3          # Jitter amplitude as a fraction of the smallest gap between values
pd_tol = 1e-10               # Smallest eigenvalue accepted for a positive definite correlation matrix
rank_cond_max = 1e12         # Largest condition number treated as invertible

# -----------------------------------------------------------------------------
# --- Solvers -----------------------------------------------------------------
# -----------------------------------------------------------------------------
init_eta_solver = {
    'tol': 1e-9,             # Sup-norm tolerance on the eta residual
    'max_iter': 200,         # Newton iterations before giving up
    'fd_step': 1e-6,         # Finite difference step for the Jacobian
    'central': False,        # Use central instead of forward differences
    'min_damping': 2.0**-20, # Smallest step fraction tried by the line search
}

init_ipf = {
    'tol': 1e-10,            # Sup-norm tolerance on generator margins, as proportions
    'max_iter': 5000,        # Number of full IPF cycles allowed
}

init_newton_fit = {
    'tol': 1e-10,            # Sup-norm tolerance on the score, as proportions
    'max_iter': 100,         # Newton-Raphson iterations allowed
}


def merge_opts(defaults, opts=None, **kwds):
    '''
    Return a copy of ``defaults`` updated with ``opts`` and keyword overrides.
    Unknown keys are rejected so that typos do not pass silently.
    '''
    from .errors import InvalidArgumentError

    merged = copy(defaults)
    for source in (opts or {}), kwds:
        for key, value in source.items():
            if value is None:
                continue
            if key not in defaults:
                raise InvalidArgumentError('unknown solver option {!r}'.format(key))
            merged[key] = value
    return merged

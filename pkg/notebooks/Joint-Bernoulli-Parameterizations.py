# -*- coding: utf-8 -*-
# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.2'
#       jupytext_version: 1.1.3
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Three Ways to Describe a Joint Bernoulli Distribution
#
# A table of $2^d$ cell probabilities $p(a)$ for $d$ binary variables can be
# rewritten in three coordinate systems, each indexed by the subsets $b$ of
# the variables:
#
#    * the log-linear interactions $\lambda_b$ (log probabilities in the Hadamard basis)
#    * the moment parameters $\xi_b = E\prod_{v \in b} D_v$ with $D_v = (-1)^{a_v}$
#    * the multivariate logistic parameters $\eta_b$, the highest-order log-linear
#      interaction of the margin on $b$
#
# A table is *palindromic* when $p(a) = p(\sim a)$, i.e. when flipping every
# variable leaves the probability unchanged.  In all three systems this is
# the statement that every odd-order parameter is zero.

# %% {"code_folding": [0]}
# Initial imports and notebook setup, click arrow to show
import os
import sys

import numpy as np
import pandas as pd
import matplotlib.pyplot as plt

sys.path.insert(0, os.path.abspath('..'))

from palindromic.params import (ProbabilityTable, lambda_from_pi, xi_from_pi, eta_from_pi,
                                pi_from_eta, eta_via_stepwise, stepwise_schedule)
from palindromic.symmetry import is_palindromic, odd_order_max
from palindromic.gaussian import equicorrelation_table, equicorrelation_params
from palindromic.generate import TriangularSystem, exact_table, xi_recursion
from palindromic.tensor import subset_key
from palindromic.util import mystr

# %% [markdown]
# ### A trivariate example
#
# Cells are listed with the first variable changing fastest, so the table
# below is $p(000), p(100), p(010), p(110), p(001), \ldots$ and the
# complement of cell $k$ is cell $2^d - 1 - k$: a palindromic table reads
# the same backwards.

# %%
t = ProbabilityTable(np.array([15, 9, 1, 15, 15, 1, 9, 15]) / 80.0)
print('palindromic:', is_palindromic(t))

frame = pd.DataFrame({'lambda': lambda_from_pi(t).to_series(),
                      'xi': xi_from_pi(t).to_series(),
                      'eta': eta_from_pi(t).to_series()})
frame.round(4)

# %% [markdown]
# The odd-order rows (1, 2, 3 and 123) vanish in every column.  Note that
# $\eta_{12} = \tanh^{-1}(1/2)$ while $\xi_{12} = 1/2$: for a single pair
# with uniform margins $\xi = \tanh \eta$.

# %%
print('largest odd-order |lambda|:', mystr(odd_order_max(lambda_from_pi(t))))
print('tanh(eta_12) =', mystr(np.tanh(eta_from_pi(t)['12'])), ' xi_12 =', mystr(xi_from_pi(t)['12']))

# %% [markdown]
# ### From log-linear to multivariate logistic parameters, one margin at a time
#
# The $\eta$ can also be reached from $\lambda$ without building the table:
# marginalize one variable at a time, going through the subsets by
# decreasing size.  The schedule for $d=3$:

# %%
print([subset_key(b, 3) for b in stepwise_schedule(3)])
stepwise = eta_via_stepwise(lambda_from_pi(t))
print(np.allclose(stepwise.values[1:], eta_from_pi(t).values[1:]))

# %% [markdown]
# Going back from $\eta$ to $p$ has no closed form for $d \geq 3$; a damped
# Newton iteration in the log-linear coordinates solves it.

# %%
back = pi_from_eta(eta_from_pi(t))
print(np.max(np.abs(back.pi - t.pi)))

# %% [markdown]
# ### Equicorrelated triples
#
# With all three pairwise moments equal to $\xi$ the table is
# $8\pi = (1+3\xi, 1-\xi, \ldots, 1-\xi, 1+3\xi)$, which exists for
# $-1/3 < \xi < 1$.  The two-factor interactions then have closed forms.

# %%
grid = np.linspace(-0.3, 0.95, 60)
lam = [equicorrelation_params(x)['lambda'] for x in grid]
eta = [equicorrelation_params(x)['eta'] for x in grid]

plt.plot(grid, lam, label=r'$\lambda_{st}$')
plt.plot(grid, eta, label=r'$\eta_{st}$')
plt.plot(grid, grid, ':', label=r'$\xi_{st}$')
plt.xlabel(r'$\xi$')
plt.legend()
plt.show()

t_equi = equicorrelation_table(1 / 3.0)
print(pd.Series(t_equi.pi, name='pi').round(4).tolist())

# %% [markdown]
# ### Linear triangular systems
#
# Let $A_1$ be a fair coin and let each later variable follow a linear
# regression of $D_s$ on the earlier $D_j$ with no constant term.  Every
# such system generates a palindromic table, and its moments follow from a
# one-variable-at-a-time recursion.

# %%
system = TriangularSystem([[0, 0, 0], [0.6, 0, 0], [0.2, -0.5, 0]])
t_sys = exact_table(system)
print('palindromic:', is_palindromic(t_sys))
print('recursion agrees:', np.allclose(xi_recursion(system).values, xi_from_pi(t_sys).values))
xi_from_pi(t_sys).to_series().round(4)

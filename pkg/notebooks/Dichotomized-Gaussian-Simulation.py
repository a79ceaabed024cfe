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
# # Median Dichotomization and the Calibration of the Tests
#
# Two small simulation studies:
#
#    1. Dichotomize bivariate Gaussian samples at the median and compare the
#       moment $\xi_{12}$ of the resulting $2 \times 2$ table with
#       $(2/\pi)\arcsin\rho$.
#    2. Draw samples from a palindromic table generated by a linear
#       triangular system and check that Wilks' statistic for symmetry is
#       close to $\chi^2$ on $2^{d-1}$ degrees of freedom.

# %% {"code_folding": [0]}
# Initial imports and notebook setup, click arrow to show
import os
import sys

import numpy as np
import matplotlib.pyplot as plt
from scipy import stats

sys.path.insert(0, os.path.abspath('..'))

from palindromic.gaussian import DataMatrix, median_dichotomize, xi_from_rho
from palindromic.generate import random_triangular_system, simulate_wilks
from palindromic.graphs import ising_table, simulate_studentized
from palindromic.params import xi_from_pi
from palindromic.util import log_progress, mystr

# %% [markdown]
# ### The arcsin law

# %%
rng = np.random.default_rng(0)
rhos = np.linspace(-0.9, 0.9, 19)
estimates = []
for rho in log_progress(rhos, every=1, name='Correlations'):
    x = rng.multivariate_normal([0, 0], [[1, rho], [rho, 1]], size=5000)
    counts = median_dichotomize(DataMatrix(x), seed=int(rng.integers(1 << 31)))
    estimates.append(xi_from_pi(counts.to_table())['12'])

plt.plot(rhos, xi_from_rho(rhos), label=r'$(2/\pi)\arcsin\rho$')
plt.plot(rhos, estimates, 'o', label='dichotomized samples')
plt.plot(rhos, rhos, ':', label=r'$\rho$')
plt.xlabel(r'$\rho$')
plt.ylabel(r'$\xi_{12}$')
plt.legend()
plt.show()

# %% [markdown]
# ### Wilks' statistic under symmetry

# %%
system = random_triangular_system(5, seed=2, max_row_sum=0.5)
w = simulate_wilks(system, n=10000, reps=500, seed=9)
df = 2 ** (system.d - 1)
print('mean', mystr(w.mean()), 'against', df)

grid = np.linspace(0, 45, 200)
plt.hist(w, bins=30, density=True, alpha=0.5, label='simulated')
plt.plot(grid, stats.chi2.pdf(grid, df), label=r'$\chi^2_{%d}$' % df)
plt.xlabel('w')
plt.legend()
plt.show()

# %% [markdown]
# ### Studentized interactions
#
# Fit the saturated trivariate palindromic model to samples from a table
# whose $\lambda_{13}$ is zero; the studentized $\hat\lambda_{13}$ should look
# standard normal.

# %%
t = ising_table(3, {(1, 2): 0.5, (2, 3): 0.3})
z = simulate_studentized(t, [(1, 2, 3)], n=5000, reps=500, seed=7)
print(z.describe().round(3))

grid = np.linspace(-4, 4, 200)
plt.hist(z['13'], bins=30, density=True, alpha=0.5, label=r'studentized $\hat\lambda_{13}$')
plt.plot(grid, stats.norm.pdf(grid), label='N(0, 1)')
plt.legend()
plt.show()

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
# # Grades in Four Subjects: Gaussian and Palindromic Models Side by Side
#
# 78 students sat three exams in each of Analysis, Algebra, Geometry and
# Physics; the data are the summed grades per subject.  We first look at the
# correlations, fit a concentration graph and an equicorrelation model, and
# then repeat the analysis on the median-dichotomized grades with a
# palindromic graphical model for the $2^4$ table.

# %% {"code_folding": [0]}
# Initial imports and notebook setup, click arrow to show
import os
import sys

import numpy as np
import pandas as pd
import matplotlib.pyplot as plt

sys.path.insert(0, os.path.abspath('..'))

from palindromic.casestudy import (SUBJECTS, casestudy_graph, load_grade_counts, load_grades,
                                   run_casestudy)
from palindromic.gaussian import corr_from_data, partial_corr, concentrations
from palindromic.graphs import cliques, decompose, fit_decomposable
from palindromic.symmetry import symmetrize
from palindromic.util import mystr

# %% [markdown]
# ### The data
#
# The file is checked against a stored SHA-256 digest when it is read.

# %%
grades = load_grades()
grades.to_frame().describe().round(2)

# %% [markdown]
# Correlations below the diagonal, partial correlations given the two
# remaining subjects above it, concentrations on the diagonal.

# %%
R = corr_from_data(grades)
P = partial_corr(R)
table = np.tril(R.values, -1) + np.triu(P.values, 1)
np.fill_diagonal(table, concentrations(R))
pd.DataFrame(table, index=SUBJECTS, columns=SUBJECTS).round(3)

# %% [markdown]
# The partial correlations of Physics with Analysis and with Algebra are
# small: Geometry separates Physics from the other two.  That is the chordal
# concentration graph with edges 12, 13, 23 and 34.

# %%
g = casestudy_graph()
print('cliques:', cliques(g))
print('separators:', decompose(g).separators)

# %%
report = run_casestudy()
gaussian = report['gaussian']
print('graph fit: w = {} on {} df, p = {}'.format(
    mystr(gaussian['graph_fit']['w']), gaussian['graph_fit']['df'],
    mystr(gaussian['graph_fit']['pvalue'])))
print('equicorrelation of {}: rho = {}, w = {} on {} df'.format(
    gaussian['equicorrelation']['block'], mystr(gaussian['equicorrelation']['rho_hat']),
    mystr(gaussian['equicorrelation']['w']), gaussian['equicorrelation']['df']))
print('Physics vs. the sum of the other three:', mystr(gaussian['sum_score_correlation']))

# %% [markdown]
# ### The dichotomized table
#
# Splitting each subject at its median gives a $2^4$ table of counts; level
# 0 is "at or below the median".  If the grades were close to Gaussian the
# table should be close to palindromic.

# %%
counts = load_grade_counts()
sym = symmetrize(counts)
pd.DataFrame({'observed': counts.counts, 'symmetrized': sym.fitted.counts}).T

# %%
print('Wilks test of symmetry: w = {} on {} df, p = {}'.format(
    mystr(sym.wilks), sym.df, mystr(sym.pvalue)))

# %% [markdown]
# The same graph, fitted as a palindromic model.  The deviance splits
# exactly into the symmetry part and the conditional independence part.

# %%
fit = fit_decomposable(counts, g)
print(fit)
pd.DataFrame({'lambda': [fit.lambda_hat[k] for k in fit.studentized.index],
              'se': fit.se_lambda, 'studentized': fit.studentized}).round(3)

# %%
binary = report['binary']
print('P(Physics low | Geometry low) =', mystr(binary['p_physics_low_given_geometry_low']))

fig, ax = plt.subplots()
ax.bar(np.arange(16) - 0.2, counts.counts, width=0.4, label='observed')
ax.bar(np.arange(16) + 0.2, fit.fitted.counts, width=0.4, label='fitted')
ax.set_xlabel('cell')
ax.set_ylabel('count')
ax.legend()
plt.show()

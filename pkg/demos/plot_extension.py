"""
Extending a map to Hermitian matrices
=====================================

A transition-preserving map on rank-n projections extends to a real-linear
map Phi on Hermitian matrices that preserves the trace form. Rank-one
projections are reached through a signed combination of n + 1 rank-n ones.
"""

import numpy as np

from grasswig import extend_map, make_generator, random_projection
from grasswig.extend import check_trace_form, projection_spanning_basis, rank_one_decomposition

d, n = 6, 2

###############################################################################
# Rank-one decomposition: coefficients (1/n - 1, 1/n, ..., 1/n).
p = random_projection(d, 1, seed=0)
dec = rank_one_decomposition(p, n)
print("coefficients:", dec.coefficients, "sum:", dec.coefficients.sum())
print("residual    :", np.abs(dec.combine() - p.matrix).max())

###############################################################################
# d^2 rank-n projections span the Hermitian matrices.
basis, change = projection_spanning_basis(d, n)
print("basis size  :", len(basis), "cond:", np.linalg.cond(change))

###############################################################################
# Phi from an antiunitary generator keeps tr AB.
Phi = extend_map(make_generator("Antiunitary", d, n, seed=1), d, n)
print("trace form residual :", check_trace_form(Phi))
print("smallest sing. value:", Phi.smallest_singular_value())

"""
Principal angles and adjacency
==============================

Two rank-n projections are compared through the angles between their
ranges. The squared cosines add up to the transition probability.
"""

import numpy as np

from grasswig import classify_adjacency, principal_angles, random_projection, transition_probability
from grasswig.aset import random_pair

rng = np.random.default_rng(0)

###############################################################################
# A generic pair in C^6 has three non-zero angles.
P, Q = random_projection(6, 3, rng), random_projection(6, 3, rng)
theta = principal_angles(P, Q)
print("angles      :", np.round(theta, 4))
print("tr PQ       :", transition_probability(P, Q))
print("sum cos^2   :", np.sum(np.cos(theta) ** 2))
print("class       :", classify_adjacency(P, Q).value)

###############################################################################
# Adjacent pairs share an (n-1)-plane, so exactly one angle survives.
for kind in ["NonOrthogonalAdjacent", "OrthogonalAdjacent"]:
    P, Q = random_pair(6, 3, kind, rng)
    print(f"{kind:22s}", np.round(principal_angles(P, Q), 4))

###############################################################################
# The Hilbert-Schmidt distance is fixed by tr PQ: |P - Q|^2 = 2n - 2 tr PQ.
P, Q = random_projection(8, 3, rng), random_projection(8, 3, rng)
print("HS^2        :", np.linalg.norm(P.matrix - Q.matrix) ** 2)
print("2n - 2trPQ  :", 6 - 2 * transition_probability(P, Q))

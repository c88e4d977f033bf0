"""
The A-set of an adjacent pair
=============================

For rank-n projections P, Q the A-set collects rank-n R with P + Q - R
again a rank-n projection. For non-orthogonally adjacent pairs it is a
circle; for orthogonally adjacent pairs a sphere.
"""

import numpy as np

from grasswig.aset import (
    adjacent_blocks,
    aset_membership,
    aset_parametrize,
    circle_param,
    probe_aset,
    random_pair,
)

P, Q = random_pair(4, 2, "NonOrthogonalAdjacent", seed=1)

###############################################################################
# Walk once around the circle and check membership.
ts = np.linspace(0, 2 * np.pi, 8, endpoint=False)
for t in ts:
    R = aset_parametrize(P, Q, t)
    print(f"t = {t:5.3f}  member: {aset_membership(P, Q, R, 1e-10)}")

###############################################################################
# The circle lives in a 2x2 block; ``s`` is the smaller eigenvalue of p2 + q2.
cp = circle_param(adjacent_blocks(P, Q))
print("s =", cp.s)

###############################################################################
# The numerical dimension probe recovers 1 here, and 2 for orthogonal pairs.
print("non-orthogonal:", probe_aset(P, Q).estimate)
print("orthogonal    :", probe_aset(*random_pair(4, 2, "OrthogonalAdjacent", seed=2)).estimate)
print("non-adjacent  :", probe_aset(*random_pair(4, 2, "NonAdjacent", seed=3)).estimate)

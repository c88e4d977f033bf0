"""
Recovering the operator behind a map
====================================

``classify_map`` checks preservation, decides between the plain and the
complement form, and reads off a unitary or antiunitary V. Duals
``P -> I - phi(I - P)`` classify the same way.
"""

import numpy as np

from grasswig import classify_map, dualize_oracle, make_generator
from grasswig.errors import NotPreserving

###############################################################################
# Plain antiunitary map on rank-3 projections of C^8.
gen = make_generator("Antiunitary", 8, 3, seed=0)
c = classify_map(gen, 8, 3)
z = np.vdot(gen.operator.ravel(), c.V.ravel())
print(c.form.value, c.linearity.value, "residual", c.residual)
print("V matches U up to phase:", np.abs(c.V - z / abs(z) * gen.operator).max())

###############################################################################
# The complement form only exists when d = 2n.
c = classify_map(make_generator("ComplementUnitary", 6, 3, seed=1), 6, 3)
print(c.form.value, c.linearity.value)

###############################################################################
# The dual acts on rank d - n projections.
c = classify_map(dualize_oracle(gen, 8), 8, 5)
print("dual:", c.form.value, c.linearity.value)

###############################################################################
# A distortion fails the preservation check.
try:
    classify_map(make_generator("NonPreservingDistortion", 4, 2, seed=2), 4, 2)
except NotPreserving as exc:
    print("rejected, residual", round(exc.max_residual, 3))

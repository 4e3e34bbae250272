"""
Squeezed vacuum under conjugate multiports
==========================================

Alice uses U(m) and Bob uses its complex conjugate.  The squeezed vacuum
is unchanged by this pair, so its counts are perfectly correlated in every
setting.  The explicit Fock-space transform confirms it.
"""

import numpy as np

from multiport.bsv import BsvSpec, build_bsv, sector_weights
from multiport.linop import joint_transform
from multiport.loss import distribution_from_state, ideal_joint_distribution
from multiport.mub import build_mub, conjugate_pair

###############################################################################
# Sector weights grow with the number of ways to spread n photons over three
# modes and fall off geometrically in tanh^2 of the gain.

spec = BsvSpec(3, 1.0, 4)
for n, w in sector_weights(spec):
    print(f"n={n}: {w:.4f}")

###############################################################################
# Transform the state with every conjugate pair and compare count tables.

state = build_bsv(spec)
reference = ideal_joint_distribution(spec).probs
for u in build_mub(3):
    out = distribution_from_state(joint_transform(state, u, conjugate_pair(u)))
    print(u.m, np.abs(out.probs - reference).max())

###############################################################################
# The same settings on both sides scramble the correlations.

u = build_mub(3)[0]
mixed = distribution_from_state(joint_transform(state, u, u))
print("same setting:", np.abs(mixed.probs - reference).max())

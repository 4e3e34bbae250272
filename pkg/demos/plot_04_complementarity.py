"""
Complementarity of multiport rates
==================================

A state cannot have sharp rates in all unbiased settings at once.  The sum
of squared rate expectations over settings and output modes never exceeds
2, and a Fock state with all photons in one mode reaches it.
"""

from multiport.fock import StateVector
from multiport.witness import (
    complementarity_intensities,
    complementarity_rates,
    rate_bound_max,
    rate_bound_value,
    sample_complementarity,
)

###############################################################################
# Saturation: sharp in the number basis, flat in every other setting.

for p in (2, 3, 5):
    print(p, complementarity_rates(StateVector.fock((2,) + (0,) * (p - 1))))

###############################################################################
# Random states stay well inside the bound.

for p in (2, 3, 5):
    print(p, sample_complementarity(p, 500, 4, seed=1))

###############################################################################
# The phasor form: sum over settings of |<R_m>|^2 is at most 1.

print(rate_bound_value(StateVector.fock((1, 0, 0))), rate_bound_max(3, 2000, 4, seed=1))
value, cap = complementarity_intensities(StateVector.fock((1, 1, 0)))
print(value, "<=", cap)

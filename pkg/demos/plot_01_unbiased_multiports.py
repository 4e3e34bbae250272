"""
Unbiased multiports for prime mode counts
=========================================

Each setting is a p x p unitary.  Any two settings are unbiased: a photon
prepared in an output mode of one is equally likely to be found in every
output mode of another.
"""

import numpy as np

from multiport.mub import (
    build_mub,
    build_pauli,
    rate_observable_matrix,
    unbiasedness_deviation,
)

###############################################################################
# Three modes give four settings.  The last one is the identity, so it
# measures photon numbers directly.

settings = build_mub(3)
np.set_printoptions(precision=3, suppress=True)
for u in settings:
    print(f"m={u.m}\n{u.matrix}\n")

###############################################################################
# Overlaps between rows of different settings all have modulus squared 1/3.

overlaps = np.abs(settings[0].matrix @ settings[1].matrix.conj().T) ** 2
print(overlaps)
for p in (2, 3, 5, 7, 11):
    print(p, unbiasedness_deviation(build_mub(p)))

###############################################################################
# Each setting diagonalizes one generalized Pauli matrix.  The phasor
# observable of a setting, sum_j omega^j |phi_j><phi_j|, reproduces it.

pauli = build_pauli(3)
for u, m in zip(settings, pauli.M):
    print(u.m, np.allclose(rate_observable_matrix(u), m))

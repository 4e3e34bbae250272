"""
Detector efficiency thresholds
==============================

Loss thins every mode binomially.  Below some efficiency the correlations no
longer beat the separable bound.  The intensity criterion needs eta > 1/4
at every gain; the rate criterion does better when the beam is bright.
"""

import numpy as np

from multiport.bsv import WEIGHTINGS, BsvSpec
from multiport.witness import INTENSITY_D3, RATE_D3, criterion, critical_eta

###############################################################################
# Witness along eta at fixed gain.  Negative means entangled.

spec = BsvSpec(3, 1.0, 10, renormalized=True)
for eta in np.linspace(0.1, 1.0, 10):
    r = criterion(RATE_D3, spec, eta)
    print(f"eta={eta:.1f}  lhs={r.lhs:8.4f}  rhs={r.rhs:8.4f}  {r.verdict}")

###############################################################################
# Thresholds against gain.

for g in (0.05, 0.5, 1.0, 2.0, 3.0):
    i = critical_eta(INTENSITY_D3, BsvSpec(3, g, 10))
    r = critical_eta(RATE_D3, BsvSpec(3, g, 10, renormalized=True))
    print(f"G={g}: intensity {i:.4f}, rate {r:.4f}")

###############################################################################
# At high gain the answer depends on how the photon-number sectors are
# mixed.  Weighting by sector norm gives about 0.154.

for w in WEIGHTINGS:
    print(w, round(critical_eta(RATE_D3, BsvSpec(3, 3.0, 10, renormalized=True), w), 4))

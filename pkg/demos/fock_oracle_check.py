"""
Checking the Gaussian closed forms by brute force
=================================================

The oracle builds the thermal mechanical generator in a truncated Fock
space, finds its stationary state and evaluates the correlators by quantum
regression.  No moment factorization enters.
"""

import numpy as np

from sideband_stats import IdealParams, g2_closed, g3_wick
from sideband_stats.oracle import oracle_coherences

p = IdealParams(beta=0.3, n_m=0.3, gamma_eff=0.05)
taus = np.array([0.0, p.quarter_period, 2 * p.quarter_period])
curve = oracle_coherences(p, taus)

print(f"truncation dim {curve.limits_metadata['dim']}")
for tau, go, gc in zip(taus, curve.g2, g2_closed(p, taus)):
    print(f"tau={tau:6.3f}  g2 oracle={go:.12f}  closed={gc:.12f}")
for tau, go, gc in zip(taus[:2], curve.g3[:2], g3_wick(p, taus[:2])):
    print(f"tau={tau:6.3f}  g3 oracle={go:.12f}  Wick={gc:.12f}")

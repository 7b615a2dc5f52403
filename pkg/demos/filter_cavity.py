"""
Separating the sidebands with a filter cavity
=============================================

A lossless two-port filter of bandwidth B passes both inner sidebands at
+-delta.  Wider filters distort less, with the distortion falling as
(delta / B)^2.
"""

import numpy as np

from sideband_stats import FilterParams, filter_susceptibility, filtered_noise_weight, passband_distortion

delta = 0.01
for ratio in (10, 50, 200):
    fp = FilterParams(ratio * delta)
    print(f"B = {ratio:3d} delta: passband distortion {passband_distortion(fp, delta):.2e}")

# energy conservation at a few frequencies
fp = FilterParams(0.5, b_left=0.2)
w = np.linspace(-2, 2, 5)
chi = filter_susceptibility(w, fp)
print(np.abs(fp.b_right * chi - 1) ** 2 + fp.b_left * fp.b_right * np.abs(chi) ** 2)
print(filtered_noise_weight(w, fp))

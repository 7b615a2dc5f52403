"""
Where the light stops being classical
=====================================

Scan K = g3 / g2^2 over drive ratio and phonon number, for both the
equal-time and the quarter-delay criterion, then redo the delayed scan
against the occupation that pure sideband cooling would reach.
"""

from sideband_stats.scan import region_scan

for criterion in ("k0", "kdelay"):
    rmap = region_scan(criterion, "nm")
    opt = rmap.optimum
    share = rmap.violated.mean()
    print(f"{criterion:6s}: largest n_m threshold {opt['threshold']:.4f} at beta {opt['beta']:.4f}"
          f" ({share:.0%} of the grid violated)")

# n_m0 axis: intrinsic cooling limit mapped through (n_m0 + beta) / (1 - beta)
rmap = region_scan("kdelay", "nm0")
print(f"kdelay on n_m0: threshold {rmap.optimum['threshold']:.4f} at beta {rmap.optimum['beta']:.4f}")

"""
Full cavity plus mechanics simulation
=====================================

Integrates the two-mode master equation with both drives (about half a
minute) and compares the fitted phonon number and linewidth with the
adiabatic backaction formulas.
"""

from sideband_stats import SystemParams, backaction
from sideband_stats.oracle import two_mode_simulate

p = SystemParams.from_cooperativities(gamma=0.005, omega_m=4.0, delta=0.05, c_r=20.0, beta=0.25, n_th=0.5)
pred = backaction(p, "corrected")
res = two_mode_simulate(p)

print(f"n_m:       simulated {res.n_m_fit:.4f}  predicted {pred.n_m:.4f}")
print(f"gamma_eff: simulated {res.gamma_eff_fit / p.gamma:.2f} gamma  predicted {pred.gamma_eff / p.gamma:.2f} gamma")
print(f"cavity occupation {res.diagnostics['cavity_occupation']:.3e}, tail {res.diagnostics['tail_population']:.1e}")

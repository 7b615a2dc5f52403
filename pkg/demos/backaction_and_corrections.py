"""
From couplings to the mechanical state
======================================

Two drives set the optical damping and heating.  The ideal treatment keeps
only the inner sidebands; the corrected one adds the cavity response at
both detunings and the outer sidebands.
"""

from sideband_stats import (
    SystemParams,
    backaction,
    cooling_limit,
    g2_wick,
    two_phonon_drive_ratio,
)

p = SystemParams.from_cooperativities(gamma=0.005, omega_m=4.0, delta=0.05, c_r=20.0, beta=0.25, n_th=0.5)
for order in ("ideal", "corrected"):
    d = backaction(p, order)
    print(f"{order:9s}: gamma_eff/gamma={d.gamma_eff / p.gamma:.3f}  n_m={d.n_m:.4f}")

# strong red cooling approaches the quantum limit
cold = SystemParams.from_cooperativities(gamma=1e-5, omega_m=4.0, delta=0.05, c_r=1e4, beta=0.0, n_th=100.0)
print(f"cooling limit n_m0={cooling_limit(cold).n_m0:.4f}")

# corrected minus ideal g2(0) shrinks as delta^2
for delta in (0.01, 0.02, 0.04, 0.08):
    q = SystemParams.from_cooperativities(gamma=1e-8, omega_m=10.0, delta=delta, c_r=100.0, beta=0.25, n_th=0.1)
    diff = g2_wick(q, 0.0, "corrected") - g2_wick(q, 0.0, "ideal")
    print(f"delta={delta:.2f}: g2 correction {diff:+.3e}")

# a detuned cavity drives two-phonon transitions; keep this ratio small
r = SystemParams.from_cooperativities(gamma=1e-5, omega_m=10.0, delta=0.05, delta_c=0.01, c_r=40.0, beta=0.25)
print(f"two-phonon drive ratio {two_phonon_drive_ratio(r):.3e}")
print(f"detuned gamma_eff/gamma={backaction(r, 'corrected').gamma_eff / r.gamma:.3f}")

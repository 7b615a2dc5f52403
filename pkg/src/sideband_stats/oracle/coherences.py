"""Coherences of the composite sideband operator by direct quantum regression.

Nothing here assumes Gaussian statistics: the mechanical mode is a truncated
damped oscillator, the photon operator is a linear combination of ``b`` and
``b^dag`` with explicit drive phases, and every normally ordered moment is
propagated with the Lindblad generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..coherence import CoherenceCurve, CoherenceSample
from ..errors import DomainError, TruncationError
from ..model import IdealParams, SystemParams, cavity_susceptibility
from .liouville import (
    dag,
    destroy,
    regression_correlator,
    start_dim,
    stationary_state,
    thermal_liouvillian,
)


def composite_sideband_operator(params, phase_time, dim):
    """Innermost-sideband operator ``a_i`` at absolute time ``phase_time``.

    ``a_i = -i e^{-i delta t} G_r chi(delta) b - i e^{i delta t} G_b chi(-delta) b^dag``.
    With :class:`IdealParams` the susceptibilities take their resonant value 2
    and the red coupling is 1.
    """
    b = destroy(dim)
    t = float(phase_time)
    if isinstance(params, IdealParams):
        delta = params.delta
        c_red = -2j
        c_blue = -2j * math.sqrt(params.beta)
    elif isinstance(params, SystemParams):
        delta = params.delta
        c_red = -1j * params.g_r * complex(cavity_susceptibility(delta, params.delta_c))
        c_blue = -1j * params.g_b * complex(cavity_susceptibility(-delta, params.delta_c))
    else:
        raise TypeError("params must be IdealParams or SystemParams")
    return c_red * np.exp(-1j * delta * t) * b + c_blue * np.exp(1j * delta * t) * dag(b)


@dataclass(frozen=True)
class DimPolicy:
    """Truncation schedule: start, double until converged, give up past ``cap``."""

    start: Optional[int] = None
    cap: int = 256
    tol: float = 1e-8
    tail_threshold: float = 1e-4

    def first(self, n_m):
        return self.start if self.start is not None else start_dim(n_m)


def _values_at_dim(ideal: IdealParams, taus, dim, tail_threshold):
    liouv = thermal_liouvillian(ideal.gamma_eff_abs, ideal.n_m, dim, tail_threshold=tail_threshold)
    state = stationary_state(liouv)
    a = composite_sideband_operator(ideal, 0.0, dim)
    ad = dag(a)
    flux_a = state.expect(ad @ a).real

    def intensity(tau):
        bt = composite_sideband_operator(ideal, tau, dim)
        return dag(bt) @ bt

    g2 = np.empty(len(taus))
    g3 = np.empty(len(taus))
    a2 = a @ a
    pair = regression_correlator(liouv, state, a, ad, intensity, taus)
    triple = regression_correlator(liouv, state, a2, dag(a2), intensity, taus)
    for i, tau in enumerate(taus):
        flux_b = state.expect(intensity(tau)).real
        g2[i] = pair[i].real / (flux_a * flux_b)
        g3[i] = triple[i].real / (flux_a**2 * flux_b)
    return g2, g3, state.tail_population


def oracle_coherences(ideal: IdealParams, taus, policy: DimPolicy = DimPolicy()) -> CoherenceCurve:
    """g2(tau), g3(t, t, t + tau) and K from the truncated-Fock regression oracle.

    The truncation is doubled until two successive dimensions agree to
    ``policy.tol`` (relative) on every returned value.

    Raises
    ------
    TruncationError
        If convergence is not reached within ``policy.cap`` levels.
    """
    taus = np.asarray(taus, dtype=float)
    if taus.ndim != 1 or len(taus) == 0:
        raise DomainError("taus must be a non-empty 1-D sequence")
    if taus[0] != 0 or np.any(np.diff(taus) <= 0):
        raise DomainError("taus must start at 0 and increase strictly")
    if ideal.gamma_eff_abs <= 0:
        raise DomainError("oracle needs gamma_eff > 0")

    dim = policy.first(ideal.n_m)
    prev = None
    history = []
    while True:
        if dim > policy.cap:
            raise TruncationError(f"no convergence to {policy.tol:g} within dim {policy.cap}")
        try:
            g2, g3, tail = _values_at_dim(ideal, taus, dim, policy.tail_threshold)
        except TruncationError:
            prev = None
            dim *= 2
            continue
        cur = np.concatenate([g2, g3])
        if prev is not None:
            change = float(np.max(np.abs(cur - prev) / np.maximum(np.abs(cur), 1e-300)))
            history.append((dim, change))
            if change < policy.tol:
                break
        prev = cur
        dim *= 2

    samples = tuple(
        CoherenceSample(tau=float(t), g2=float(x), g3=float(y), k=float(y / x**2), order="oracle",
                        components={"dim": dim})
        for t, x, y in zip(taus, g2, g3)
    )
    meta = {"oracle": True, "dim": dim, "convergence": history, "tail_population": tail}
    return CoherenceCurve(samples, ideal, meta)

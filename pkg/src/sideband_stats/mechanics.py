"""Stationary two-time correlators of the mechanical mode.

The mechanical mode is in a thermal steady state with occupation ``n_m`` and
energy decay rate ``gamma_eff``.  For finite sideband overlap it also carries
anomalous correlations ``<b b>`` whose phase rotates at ``2 delta`` in absolute
time.  The anomalous amplitude ``sigma_m`` is stored without that phase; the
phase is attached only when a caller asks for a specific absolute time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import DerivedQuantities


def _delays(tau):
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise DomainError("delay must be >= 0; apply stationarity for negative delays")
    return tau


def _out(x):
    return x.item() if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class TwoTimeCorrelators:
    n_m: float
    gamma_eff: float
    sigma_m: complex = 0j
    delta: float = 0.0
    include_anomalous: bool = False

    def __post_init__(self):
        if self.n_m < 0:
            raise DomainError("n_m must be >= 0")
        if self.gamma_eff < 0:
            raise DomainError("gamma_eff must be >= 0")
        if not self.include_anomalous:
            object.__setattr__(self, "sigma_m", 0j)

    @classmethod
    def from_derived(cls, derived: DerivedQuantities, delta, include_anomalous=True):
        return cls(n_m=derived.n_m, gamma_eff=derived.gamma_eff, sigma_m=derived.sigma_m,
                   delta=delta, include_anomalous=include_anomalous)


def anomalous_amplitude(gamma, c_r_tilde, c_b_tilde, gamma_eff, delta):
    """Anomalous amplitude ``-gamma sqrt(C_r C_b) / (gamma_eff + 2 i delta)``."""
    if gamma_eff == 0 and delta == 0:
        raise DomainError("anomalous amplitude undefined for gamma_eff = delta = 0")
    return -gamma * math.sqrt(c_r_tilde * c_b_tilde) / complex(gamma_eff, 2.0 * delta)


def normal_correlator(c: TwoTimeCorrelators, tau):
    """``<b^dag(t + tau) b(t)> = n_m exp(-gamma_eff tau / 2)``."""
    tau = _delays(tau)
    return _out(c.n_m * np.exp(-0.5 * c.gamma_eff * tau))


def antinormal_correlator(c: TwoTimeCorrelators, tau):
    """``<b(t + tau) b^dag(t)> = (n_m + 1) exp(-gamma_eff tau / 2)``."""
    tau = _delays(tau)
    return _out((c.n_m + 1.0) * np.exp(-0.5 * c.gamma_eff * tau))


def anomalous_correlator(c: TwoTimeCorrelators, t, tau):
    """Anomalous pair ``(<b(t+tau) b(t)>, <b^dag(t+tau) b^dag(t)>)`` at absolute time ``t``."""
    if not c.include_anomalous:
        raise DomainError("anomalous correlators are disabled for this state")
    if c.gamma_eff == 0 and c.delta == 0:
        raise DomainError("anomalous correlator undefined for gamma_eff = delta = 0")
    tau = _delays(tau)
    decay = np.exp(-0.5 * c.gamma_eff * tau)
    phase = np.exp(2j * c.delta * np.asarray(t, dtype=float))
    bb = phase * decay * c.sigma_m
    return _out(bb), _out(np.conj(bb))

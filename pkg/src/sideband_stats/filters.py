"""Cascaded filter cavity between the optomechanical cavity and the detectors.

A single two-mirror filter cavity of linewidth ``B`` (in units of kappa),
resonant with the optomechanical cavity, is driven by the right-hand output
of the optomechanical cavity.  ``stages`` composes identical stages by
raising the passband weight to that power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class FilterParams:
    """Filter cavity rates.

    Parameters
    ----------
    b_total : float
        Filter linewidth ``B``.
    b_left, b_right : float
        Mirror contributions, summing to ``b_total``.  ``b_right`` defaults to
        ``b_total - b_left``; with neither given the filter is symmetric.
    kappa_right : float
        Right-mirror contribution to the optomechanical cavity linewidth.
    delta_c : float
        Detuning shared with the optomechanical cavity.
    """

    b_total: float
    b_left: Optional[float] = None
    b_right: Optional[float] = None
    kappa_right: float = 1.0
    delta_c: float = 0.0

    def __post_init__(self):
        if not self.b_total > 0:
            raise DomainError("b_total must be > 0")
        left, right = self.b_left, self.b_right
        if left is None and right is None:
            left = right = self.b_total / 2.0
        elif right is None:
            right = self.b_total - left
        elif left is None:
            left = self.b_total - right
        if not (left > 0 and right > 0 and self.kappa_right > 0):
            raise DomainError("filter mirror rates and kappa_right must be > 0")
        if abs(left + right - self.b_total) > 1e-12 * self.b_total:
            raise DomainError("b_left + b_right must equal b_total")
        object.__setattr__(self, "b_left", float(left))
        object.__setattr__(self, "b_right", float(right))

    def hierarchy_ok(self, delta, omega_m, margin=10.0):
        """Whether ``delta << B << 1, omega_m`` holds by ``margin``."""
        b = self.b_total
        return delta * margin <= b and b * margin <= min(1.0, omega_m)


def filter_susceptibility(omega, fp: FilterParams):
    """Filter susceptibility ``1 / (B/2 - i (omega + delta_c))``."""
    return 1.0 / (fp.b_total / 2.0 - 1j * (np.asarray(omega) + fp.delta_c))


def output_coefficients(omega, fp: FilterParams):
    """Coefficients of the filter's right-hand output on each input field.

    Returns a dict with keys ``on_a`` (intracavity optomechanical mode),
    ``on_a_inR`` (vacuum entering the optomechanical cavity's right mirror)
    and ``on_c_inR`` (vacuum entering the filter's right mirror).
    """
    chi = filter_susceptibility(omega, fp)
    through = math.sqrt(fp.b_left * fp.b_right) * chi
    return {
        "on_a": through * math.sqrt(fp.kappa_right),
        "on_a_inR": -through,
        "on_c_inR": fp.b_right * chi - 1.0,
    }


def filtered_noise_weight(omega, fp: FilterParams, stages=1):
    """Spectral weight ``|(B/2) chi_f(omega)|^2`` applied to cavity vacuum noise."""
    if stages < 1:
        raise DomainError("stages must be >= 1")
    w = np.abs(0.5 * fp.b_total * filter_susceptibility(omega, fp)) ** 2
    return w**stages


def passband_distortion(fp: FilterParams, delta, stages=1):
    """Largest departure from unit transmission at the two sideband centres ``+-delta``."""
    if not delta > 0:
        raise DomainError("delta must be > 0")
    w = filtered_noise_weight(np.array([delta, -delta]), fp, stages)
    return float(np.max(np.abs(1.0 - w)))

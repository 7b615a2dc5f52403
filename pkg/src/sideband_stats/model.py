"""Physical parameters, cavity response and dynamical backaction.

All rates and frequencies are dimensionless, measured in units of the cavity
energy decay rate (kappa = 1).  The only exception is
:func:`thermal_occupation`, which takes absolute SI inputs.

Two parameterizations are first class:

* :class:`SystemParams` -- the physical drive/bath parameters.
* :class:`IdealParams` -- the reduced set (beta, n_m, gamma_eff, delta) used by
  the ideal-limit coherence formulas, where the mechanical occupation and
  linewidth are treated as independent inputs.

:func:`backaction` converts the former into the mechanical steady state.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from scipy import constants

from .errors import DomainError, InstabilityError

ORDERS = ("ideal", "corrected")


def _check_order(order):
    if order not in ORDERS:
        raise ValueError(f"order must be one of {ORDERS}, got {order!r}")


@dataclass(frozen=True)
class SystemParams:
    """Physical parameter set, in units of the cavity linewidth.

    Parameters
    ----------
    gamma : float
        Intrinsic mechanical energy decay rate.
    omega_m : float
        Mechanical angular frequency (the effective frequency; the optical
        spring shift is absorbed into it).
    delta : float
        Half the splitting between the two innermost sidebands.
    delta_c : float
        Detuning of the midpoint of the two drives from cavity resonance.
    g_r, g_b : float
        Linearized couplings of the red- and blue-detuned drives.
    n_th : float
        Thermal occupation of the mechanical bath.
    """

    gamma: float
    omega_m: float
    delta: float
    delta_c: float = 0.0
    g_r: float = 0.0
    g_b: float = 0.0
    n_th: float = 0.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise DomainError(f"gamma must be > 0, got {self.gamma}")
        if not self.omega_m > 0:
            raise DomainError(f"omega_m must be > 0, got {self.omega_m}")
        if not self.delta >= 0:
            raise DomainError(f"delta must be >= 0, got {self.delta}")
        for name in ("g_r", "g_b", "n_th"):
            if not getattr(self, name) >= 0:
                raise DomainError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not math.isfinite(self.delta_c):
            raise DomainError("delta_c must be finite")

    @classmethod
    def from_cooperativities(cls, gamma, omega_m, delta, c_r, beta, n_th=0.0, delta_c=0.0):
        """Build parameters from the red cooperativity and the drive ratio beta."""
        if c_r < 0 or beta < 0:
            raise DomainError("c_r and beta must be >= 0")
        g_r = math.sqrt(c_r * gamma / 4.0)
        return cls(gamma=gamma, omega_m=omega_m, delta=delta, delta_c=delta_c,
                   g_r=g_r, g_b=g_r * math.sqrt(beta), n_th=n_th)

    @property
    def beta(self):
        if self.g_r == 0:
            return math.nan if self.g_b == 0 else math.inf
        return (self.g_b / self.g_r) ** 2

    @property
    def big_omega(self):
        """Detuning of the outermost sidebands, 2*omega_m - delta."""
        return 2.0 * self.omega_m - self.delta

    def hierarchy_flags(self, margin=10.0):
        """Diagnostic flags for the assumed parameter hierarchy (not enforced).

        A flag is True when the stated inequality holds by at least ``margin``.
        """
        return {
            "gamma_ll_delta": self.delta > 0 and self.gamma * margin <= self.delta,
            "delta_ll_kappa": self.delta * margin <= 1.0,
            "detuning_ll_kappa": abs(self.delta_c) * margin <= 1.0,
            "resolved_sideband": self.omega_m > 1.0,
        }

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class IdealParams:
    """Reduced parameter set for the ideal-limit formulas.

    ``gamma_eff`` is expressed in units of ``delta``; ``delta`` sets the
    absolute time scale and may be left at 1.
    """

    beta: float
    n_m: float
    gamma_eff: float = 0.05
    delta: float = 1.0

    def __post_init__(self):
        if not self.beta >= 0:
            raise DomainError(f"beta must be >= 0, got {self.beta}")
        if not self.n_m >= 0:
            raise DomainError(f"n_m must be >= 0, got {self.n_m}")
        if not self.gamma_eff >= 0:
            raise DomainError(f"gamma_eff must be >= 0, got {self.gamma_eff}")
        if not self.delta > 0:
            raise DomainError(f"delta must be > 0, got {self.delta}")
        if self.beta == 0 and self.n_m == 0:
            raise DomainError("beta and n_m cannot both be zero: no sideband photons")

    @property
    def gamma_eff_abs(self):
        """Effective linewidth in the same absolute units as ``delta``."""
        return self.gamma_eff * self.delta

    @property
    def quarter_period(self):
        """First oscillation minimum of g2, pi / (2 delta)."""
        return math.pi / (2.0 * self.delta)

    def as_dict(self):
        return asdict(self)


class Cooperativities(NamedTuple):
    c_r: float
    c_b: float
    c_r_tilde: float
    c_b_tilde: float
    beta: float
    beta_tilde: float


@dataclass(frozen=True)
class DerivedQuantities:
    """Everything :func:`backaction` derives from a :class:`SystemParams`."""

    order: str
    beta: float
    beta_tilde: float
    c_r: float
    c_b: float
    c_r_tilde: float
    c_b_tilde: float
    s: float
    t_plus_delta: float
    t_minus_delta: float
    t_plus_omega: float
    t_minus_omega: float
    gamma_eff: float
    n_m: float
    n_m0: float
    sigma_m: complex
    mu_ratio: float
    stable: bool

    def to_ideal(self, delta):
        """Reduced parameters (gamma_eff rescaled to units of ``delta``)."""
        if not self.stable:
            raise InstabilityError(self.gamma_eff)
        beta = self.beta_tilde if self.order == "corrected" else self.beta
        return IdealParams(beta=beta, n_m=self.n_m, gamma_eff=self.gamma_eff / delta, delta=delta)

    def as_dict(self):
        d = asdict(self)
        d["sigma_m"] = [self.sigma_m.real, self.sigma_m.imag]
        return d


def cavity_susceptibility(omega, delta_c=0.0):
    """Cavity susceptibility ``1 / (1/2 - i (omega + delta_c))``."""
    return 1.0 / (0.5 - 1j * (np.asarray(omega) + delta_c))


def normalized_response(omega, delta_c=0.0):
    """Normalized cavity response ``|chi_c|^2 / 4``, equal to 1 at ``omega = -delta_c``."""
    x = np.asarray(omega) + delta_c
    return 1.0 / (1.0 + 4.0 * x * x)


def sideband_suppression(omega_m):
    """Resolved-sideband suppression factor ``1 / (1 + (4 omega_m)^2)``."""
    if np.any(np.asarray(omega_m) <= 0):
        raise DomainError("omega_m must be > 0")
    return 1.0 / (1.0 + (4.0 * np.asarray(omega_m)) ** 2)


def _raw_cooperativities(p: SystemParams):
    c_r = 4.0 * p.g_r**2 / p.gamma
    c_b = 4.0 * p.g_b**2 / p.gamma
    c_r_t = float(normalized_response(p.delta, p.delta_c)) * c_r
    c_b_t = float(normalized_response(-p.delta, p.delta_c)) * c_b
    if c_r_t > 0:
        beta_t = c_b_t / c_r_t
    else:
        beta_t = math.nan if c_b_t == 0 else math.inf
    return Cooperativities(c_r, c_b, c_r_t, c_b_t, p.beta, beta_t)


def cooperativities(params: SystemParams) -> Cooperativities:
    """Bare and effective cooperativities plus the drive ratios beta, beta_tilde.

    Ratios are ``inf`` when the red coupling vanishes.
    """
    if params.g_r == 0 and params.g_b == 0:
        raise DomainError("cooperativities undefined with both couplings zero")
    return _raw_cooperativities(params)


def _backaction_core(p: SystemParams, order):
    co = _raw_cooperativities(p)
    s = float(sideband_suppression(p.omega_m))
    tpd = float(normalized_response(p.delta, p.delta_c))
    tmd = float(normalized_response(-p.delta, p.delta_c))
    tpo = float(normalized_response(p.big_omega, p.delta_c))
    tmo = float(normalized_response(-p.big_omega, p.delta_c))
    if order == "ideal":
        damping = 1.0 + (1.0 - s) * (co.c_r - co.c_b)
        heating = p.n_th + co.c_b + s * co.c_r
    else:
        damping = 1.0 + (tpd - tmo) * co.c_r - (tmd - tpo) * co.c_b
        heating = p.n_th + tmd * co.c_b + tmo * co.c_r
    return co, s, (tpd, tmd, tpo, tmo), damping, heating


def backaction(params: SystemParams, order="ideal", strict=True) -> DerivedQuantities:
    """Effective mechanical linewidth and steady occupation under two-tone driving.

    Parameters
    ----------
    params : SystemParams
    order : {"ideal", "corrected"}
        ``"ideal"`` uses the resolved-sideband factor ``s`` with both sidebands
        at cavity resonance.  ``"corrected"`` evaluates the normalized cavity
        response at the actual sideband detunings +-delta and +-(2 omega_m - delta).
    strict : bool
        When True an unstable point raises :class:`InstabilityError`; otherwise
        the result is returned with ``stable=False`` and ``n_m = nan``.
    """
    _check_order(order)
    p = params
    co, s, (tpd, tmd, tpo, tmo), damping, heating = _backaction_core(p, order)
    gamma_eff = p.gamma * damping
    stable = gamma_eff > 0
    if not stable and strict:
        raise InstabilityError(gamma_eff)

    n_m = heating / damping if stable else math.nan
    if order == "ideal":
        n_m0 = (p.n_th / co.c_r if co.c_r > 0 else math.inf) + (1.0 / (4.0 * p.omega_m)) ** 2
    else:
        n_m0 = (p.n_th / co.c_r_tilde if co.c_r_tilde > 0 else math.inf) + tmo / tpd

    if stable and (gamma_eff > 0 or p.delta > 0):
        sigma_m = -p.gamma * math.sqrt(co.c_r_tilde * co.c_b_tilde) / complex(gamma_eff, 2.0 * p.delta)
    else:
        sigma_m = complex(math.nan, math.nan)

    if stable and p.delta > 0:
        mu_ratio = _mu_ratio(p, co, gamma_eff)
    else:
        mu_ratio = math.nan

    return DerivedQuantities(
        order=order, beta=co.beta, beta_tilde=co.beta_tilde,
        c_r=co.c_r, c_b=co.c_b, c_r_tilde=co.c_r_tilde, c_b_tilde=co.c_b_tilde,
        s=s, t_plus_delta=tpd, t_minus_delta=tmd, t_plus_omega=tpo, t_minus_omega=tmo,
        gamma_eff=gamma_eff, n_m=n_m, n_m0=n_m0, sigma_m=sigma_m,
        mu_ratio=mu_ratio, stable=bool(stable),
    )


def _mu_ratio(p, co, gamma_eff):
    if co.c_r_tilde == 0 or co.c_b_tilde == 0:
        return 0.0
    im_mu = 2.0 * p.gamma * co.c_r_tilde * math.sqrt(co.beta_tilde) * p.delta_c
    return im_mu**2 / (gamma_eff * p.delta)


def two_phonon_drive_ratio(params: SystemParams) -> float:
    """Size of the neglected off-resonant two-phonon drive, ``|mu|^2 / (gamma_eff delta)``.

    Only ``Im mu`` is kept; a small value justifies dropping the term.  Uses the
    corrected-order linewidth.
    """
    if params.delta == 0:
        raise DomainError("two-phonon drive ratio undefined for delta = 0")
    co, _, _, damping, _ = _backaction_core(params, "corrected")
    gamma_eff = params.gamma * damping
    if gamma_eff <= 0:
        raise InstabilityError(gamma_eff)
    return _mu_ratio(params, co, gamma_eff)


class CoolingLimit(NamedTuple):
    n_m0: float
    n_m: float
    optical_damping_dominant: bool
    resolved_sideband: bool


def nm_from_nm0(n_m0, beta):
    """Occupation reached by intrinsic cooling, ``(n_m0 + beta) / (1 - beta)``."""
    beta = np.asarray(beta, dtype=float)
    if np.any(beta >= 1) or np.any(beta < 0):
        raise DomainError("intrinsic cooling requires 0 <= beta < 1")
    out = (np.asarray(n_m0, dtype=float) + beta) / (1.0 - beta)
    return float(out) if out.ndim == 0 else out


def cooling_limit(params: SystemParams, order="ideal", margin=10.0) -> CoolingLimit:
    """Sideband-cooling floor for predominantly optical damping.

    ``n_m0`` is the occupation with only the red drive; the returned ``n_m``
    adds the blue-drive heating.  The validity assumptions (optical damping
    dominant, resolved sidebands) are reported, not enforced.
    """
    _check_order(order)
    co = _raw_cooperativities(params)
    if co.c_r == 0:
        raise DomainError("cooling limit needs a nonzero red drive")
    ratio = co.beta if order == "ideal" else co.beta_tilde
    if not ratio < 1:
        raise DomainError(f"cooling limit requires beta < 1, got {ratio:.6g}")
    if order == "ideal":
        n_m0 = params.n_th / co.c_r + (1.0 / (4.0 * params.omega_m)) ** 2
        excess = co.c_r - co.c_b
    else:
        tpd = float(normalized_response(params.delta, params.delta_c))
        tmo = float(normalized_response(-params.big_omega, params.delta_c))
        n_m0 = params.n_th / co.c_r_tilde + tmo / tpd
        excess = co.c_r_tilde - co.c_b_tilde
    return CoolingLimit(
        n_m0=n_m0,
        n_m=nm_from_nm0(n_m0, ratio),
        optical_damping_dominant=excess >= margin,
        resolved_sideband=params.omega_m >= margin**0.5,
    )


def thermal_occupation(omega_m_abs, temperature):
    """Bose occupation ``1 / (exp(hbar omega / k_B T) - 1)`` in SI units.

    Parameters
    ----------
    omega_m_abs : float
        Angular frequency in rad/s.
    temperature : float
        Bath temperature in kelvin; zero gives zero occupation.
    """
    if omega_m_abs <= 0:
        raise DomainError("omega_m_abs must be > 0")
    if temperature < 0:
        raise DomainError("temperature must be >= 0")
    if temperature == 0:
        return 0.0
    x = constants.hbar * omega_m_abs / (constants.k * temperature)
    return 1.0 / math.expm1(x)

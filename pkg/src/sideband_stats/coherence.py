"""Second- and third-order coherence of the filtered sideband photons.

Two routes are provided:

* Wick assembly (:func:`g2_wick`, :func:`g3_wick`) from the filtered-mode
  correlators.  At ``order="ideal"`` the cavity susceptibility at the two
  innermost sidebands is replaced by its resonant value, the anomalous
  mechanical terms and the virtual-phonon vacuum term are dropped.  At
  ``order="corrected"`` all of them are kept.
* Closed forms valid in the ideal limit (:func:`g2_closed`,
  :func:`g3_zero_closed`, :func:`g3_quarter_closed`).

Only the two-distinct-times pattern ``g3(t, t, t + tau)`` is implemented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

import numpy as np

from .errors import DomainError, ZeroFluxError
from .mechanics import TwoTimeCorrelators
from .model import (
    IdealParams,
    SystemParams,
    _check_order,
    backaction,
    cavity_susceptibility,
    normalized_response,
)

K0_THRESHOLD_G2 = (9.0 + math.sqrt(33.0)) / 2.0

Params = Union[IdealParams, SystemParams]


@dataclass(frozen=True)
class CoherenceSample:
    tau: float
    g2: float
    g3: Optional[float] = None
    k: Optional[float] = None
    order: str = "ideal"
    components: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CoherenceCurve:
    samples: tuple
    params: object
    limits_metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        taus = [s.tau for s in self.samples]
        if taus and taus[0] != 0:
            raise DomainError("coherence curves start at tau = 0")
        if any(b <= a for a, b in zip(taus, taus[1:])):
            raise DomainError("curve delays must be strictly increasing")

    @property
    def taus(self):
        return np.array([s.tau for s in self.samples])

    @property
    def g2(self):
        return np.array([s.g2 for s in self.samples])

    @property
    def g3(self):
        return np.array([np.nan if s.g3 is None else s.g3 for s in self.samples])

    @property
    def k(self):
        return np.array([np.nan if s.k is None else s.k for s in self.samples])


# -- filtered-mode correlators ---------------------------------------------

class _FilteredMode(NamedTuple):
    """Coefficients of the filtered-mode correlators at one parameter point."""

    red: complex        # G_r^2 |chi(delta)|^2
    blue: complex       # G_b^2 |chi(-delta)|^2
    cross: complex      # G_r G_b chi(delta) chi(-delta)
    red_pop: complex    # n_m, less the anomalous correction
    blue_pop: complex   # n_m + 1, less the anomalous correction
    gamma_eff: float
    delta: float
    vacuum: complex     # amplitude of the virtual-phonon term at tau = 0
    vacuum_rate: complex


def _filtered_mode(params: Params, order, mech: Optional[TwoTimeCorrelators] = None):
    _check_order(order)
    if isinstance(params, IdealParams):
        if order != "ideal":
            raise DomainError("corrected order needs SystemParams")
        n = params.n_m if mech is None else mech.n_m
        ge = params.gamma_eff_abs if mech is None else mech.gamma_eff
        # unit red coupling; only the ratio beta matters after normalization
        chi2 = 4.0
        return _FilteredMode(chi2, params.beta * chi2, math.sqrt(params.beta) * chi2,
                             n, n + 1.0, ge, params.delta, 0j, 0.5 + 0j)

    p = params
    if mech is None:
        d = backaction(p, order)
        mech = TwoTimeCorrelators.from_derived(d, p.delta, include_anomalous=(order == "corrected"))
    n, ge = mech.n_m, mech.gamma_eff
    if order == "ideal":
        chi_p = chi_m = chi_0 = 2.0
        red_pop, blue_pop = n, n + 1.0
        vacuum = 0j
    else:
        chi_p = complex(cavity_susceptibility(p.delta, p.delta_c))
        chi_m = complex(cavity_susceptibility(-p.delta, p.delta_c))
        chi_0 = complex(cavity_susceptibility(0.0, p.delta_c))
        c_r_t = float(normalized_response(p.delta, p.delta_c)) * 4.0 * p.g_r**2 / p.gamma
        c_b_t = float(normalized_response(-p.delta, p.delta_c)) * 4.0 * p.g_b**2 / p.gamma
        if mech.include_anomalous:
            if ge == 0 and p.delta == 0:
                raise DomainError("anomalous terms undefined for gamma_eff = delta = 0")
            red_pop = n - p.gamma * c_b_t / complex(ge, -2.0 * p.delta)
            blue_pop = n + 1.0 - p.gamma * c_r_t / complex(ge, 2.0 * p.delta)
        else:
            red_pop, blue_pop = n, n + 1.0
        vacuum = 1j * p.g_r * p.g_b * chi_p * chi_m * p.delta * chi_0
    red = p.g_r**2 * abs(chi_p) ** 2
    blue = p.g_b**2 * abs(chi_m) ** 2
    cross = p.g_r * p.g_b * chi_p * chi_m
    return _FilteredMode(red, blue, cross, red_pop, blue_pop, ge, p.delta,
                         vacuum, complex(0.5, -p.delta_c))


def _normal(fm: _FilteredMode, tau):
    rot = np.exp(1j * fm.delta * tau)
    return np.exp(-0.5 * fm.gamma_eff * tau) * (rot * fm.red * fm.red_pop + fm.blue * fm.blue_pop / rot)


def _anomalous(fm: _FilteredMode, tau):
    rot = np.exp(1j * fm.delta * tau)
    mech = -np.exp(-0.5 * fm.gamma_eff * tau) * fm.cross * (rot * fm.red_pop + fm.blue_pop / rot)
    return mech + fm.vacuum * np.exp(-fm.vacuum_rate * tau)


def _flux(fm: _FilteredMode):
    f = _normal(fm, 0.0)
    if f.real <= 0:
        raise ZeroFluxError("detected photon flux is zero (n_m = beta = 0)")
    return f.real


def _check_delays(tau):
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise DomainError("delay must be >= 0")
    return tau


def _out(x):
    return x.item() if np.ndim(x) == 0 else x


def af_normal_correlator(params: Params, tau, order="ideal", mech=None):
    """Filtered-mode correlator ``<a_f^dag(t + tau) a_f(t)>``.

    With :class:`IdealParams` the red coupling is set to 1, so the result is
    defined up to an overall positive scale.  ``mech`` overrides the mechanical
    state that would otherwise come from :func:`backaction` at the same order.
    """
    fm = _filtered_mode(params, order, mech)
    return _out(_normal(fm, _check_delays(tau)))


def af_anomalous_correlator(params: Params, tau, order="ideal", mech=None, parts=False):
    """Filtered-mode correlator ``<a_f(t + tau) a_f(t)>``.

    The mechanical part is always present; the virtual-phonon term, which decays
    at half the cavity linewidth, is included only at corrected order.  With
    ``parts=True`` the pair ``(mechanical, virtual)`` is returned instead of
    their sum.
    """
    fm = _filtered_mode(params, order, mech)
    tau = _check_delays(tau)
    total = _anomalous(fm, tau)
    if parts:
        virtual = fm.vacuum * np.exp(-fm.vacuum_rate * tau)
        return _out(total - virtual), _out(virtual)
    return _out(total)


def _g2_from(fm, tau):
    flux = _flux(fm)
    n = _normal(fm, tau)
    m = _anomalous(fm, tau)
    return 1.0 + (np.abs(n) ** 2 + np.abs(m) ** 2) / flux**2


def g2_wick(params: Params, tau, order="ideal", mech=None):
    """Normalized second-order coherence from Wick's theorem."""
    fm = _filtered_mode(params, order, mech)
    return _out(_g2_from(fm, _check_delays(tau)))


def g3_wick(params: Params, tau, order="ideal", mech=None):
    """Normalized third-order coherence ``g3(t, t, t + tau)`` from Wick's theorem."""
    fm = _filtered_mode(params, order, mech)
    tau = _check_delays(tau)
    flux = _flux(fm)
    m0 = _anomalous(fm, 0.0)
    triple = np.conj(m0) * _normal(fm, tau) * _anomalous(fm, tau)
    g3 = 4.0 * _g2_from(fm, tau) + _g2_from(fm, 0.0) - 4.0 + 4.0 * triple.real / flux**3
    return _out(g3)


def coherence_sample(params: Params, tau, order="ideal", mech=None) -> CoherenceSample:
    """g2, g3 and K at one delay, with the correlators that entered the assembly."""
    fm = _filtered_mode(params, order, mech)
    tau = float(_check_delays(tau))
    g2 = float(_g2_from(fm, tau))
    g3 = float(g3_wick(params, tau, order, mech))
    comps = {
        "normal": complex(_normal(fm, tau)),
        "anomalous": complex(_anomalous(fm, tau)),
        "equal_time_anomalous": complex(_anomalous(fm, 0.0)),
        "flux": _flux(fm),
    }
    return CoherenceSample(tau=tau, g2=g2, g3=g3, k=g3 / g2**2, order=order, components=comps)


def coherence_curve(params: Params, taus, order="ideal", mech=None) -> CoherenceCurve:
    samples = tuple(coherence_sample(params, t, order, mech) for t in np.asarray(taus, dtype=float))
    return CoherenceCurve(samples, params, {"order": order, "wick": True})


# -- ideal-limit closed forms ------------------------------------------------

def _denominator(beta, n_m):
    d = n_m + beta * (n_m + 1.0)
    if np.any(d == 0):
        raise DomainError("beta and n_m cannot both be zero")
    return d


def _g2_core(beta, n_m, decay, cos2):
    d = _denominator(beta, n_m)
    return 1.0 + decay * (1.0 + 4.0 * beta * (0.25 + n_m * (n_m + 1.0) * cos2) / d**2)


def g2_closed(ideal: IdealParams, tau):
    """Ideal-limit g2(tau) of the combined innermost sidebands."""
    tau = _check_delays(tau)
    decay = np.exp(-ideal.gamma_eff_abs * tau)
    cos2 = np.cos(2.0 * ideal.delta * tau)
    return _out(_g2_core(ideal.beta, ideal.n_m, decay, cos2))


def g2_envelope(beta, n_m, decay, side=1.0):
    """Decay envelope of g2: the closed form with ``cos(2 delta tau)`` set to ``side``."""
    return _out(_g2_core(np.asarray(beta, float), np.asarray(n_m, float), decay, side))


def oscillation_amplitude(ideal: IdealParams):
    """Initial amplitude of the g2 oscillation at period pi / delta."""
    b, n = ideal.beta, ideal.n_m
    return 4.0 * b * n * (n + 1.0) / _denominator(b, n) ** 2


def nm_from_g2(g2_zero, g2_quarter, gamma_over_delta, atol=1e-12):
    """Recover the phonon occupation from g2(0) and g2(pi / 2 delta).

    The ratio ``(g2(0) - 2) e^{-x} / (1 + e^{-x} - g2(pi/2delta))`` with
    ``x = pi gamma_eff / (2 delta)`` equals ``y / (y - 1/2)``, ``y = (n_m + 1/2)^2``,
    for any beta.  The factor ``e^{-x}`` makes the inversion exact at finite
    linewidth; it tends to 1 as ``gamma_over_delta -> 0``.

    Raises
    ------
    DomainError
        If the ratio falls in ``(-1, 1]`` or implies ``y < 1/4``.
    """
    decay = math.exp(-0.5 * math.pi * gamma_over_delta)
    den = 1.0 + decay - g2_quarter
    num = (g2_zero - 2.0) * decay
    if den == 0:
        # occupation where the quarter-delay dip vanishes
        return (math.sqrt(2.0) - 1.0) / 2.0
    r = num / den
    if -1.0 + atol < r <= 1.0:
        raise DomainError(f"ratio {r:.6g} is outside the invertible range")
    y = r / (2.0 * (r - 1.0))
    if y < 0.25 - atol:
        raise DomainError(f"implied (n_m + 1/2)^2 = {y:.6g} < 1/4")
    return max(math.sqrt(max(y, 0.25)) - 0.5, 0.0)


def g3_zero_closed(ideal: IdealParams):
    """Equal-time g3 of any Gaussian state, ``9 g2(0) - 12``."""
    return 9.0 * g2_closed(ideal, 0.0) - 12.0


def g3_quarter_closed(ideal: IdealParams):
    """g3 at the first oscillation minimum, in the limit gamma_eff / delta -> 0.

    For extreme (beta, n_m) this can come out negative; the raw
    value is returned and should be read as a validity warning.
    """
    return _g3_quarter_core(ideal.beta, ideal.n_m)


def _g3_quarter_core(beta, n_m):
    d = _denominator(beta, n_m)
    m = 2.0 * n_m + 1.0
    return 6.0 + beta / d**2 * (8.0 - 3.0 * m**2 + 4.0 * m * (n_m - beta * (n_m + 1.0)) / d)


def k_functional(g3, g2):
    """``K = g3 / g2^2``; values below 1 are nonclassical."""
    g2 = np.asarray(g2, dtype=float)
    if np.any(g2 == 0):
        raise ZeroDivisionError("K is undefined for g2 = 0")
    return _out(np.asarray(g3, dtype=float) / g2**2)


def k_equal_time(beta, n_m):
    """Vectorized ``K(0)`` in the ideal limit."""
    g2 = _g2_core(np.asarray(beta, float), np.asarray(n_m, float), 1.0, 1.0)
    return _out((9.0 * g2 - 12.0) / g2**2)


def k_quarter_delay(beta, n_m):
    """Vectorized ``K(pi / 2 delta)`` in the limit gamma_eff / delta -> 0."""
    beta, n_m = np.asarray(beta, float), np.asarray(n_m, float)
    g2 = _g2_core(beta, n_m, 1.0, -1.0)
    return _out(_g3_quarter_core(beta, n_m) / g2**2)


class Classicality(NamedTuple):
    k: float
    violated: bool
    g2: float
    g3: float


def classicality_check(ideal: IdealParams, which="equal_time") -> Classicality:
    """Evaluate K against the classical bound K >= 1.

    ``equal_time`` tests the single-time inequality (positive Glauber-Sudarshan
    function); ``quarter_delay`` tests the two-time inequality at
    ``tau = pi / 2 delta`` with the delay decay neglected.
    """
    b, n = ideal.beta, ideal.n_m
    if which == "equal_time":
        g2 = float(_g2_core(b, n, 1.0, 1.0))
        g3 = 9.0 * g2 - 12.0
    elif which == "quarter_delay":
        g2 = float(_g2_core(b, n, 1.0, -1.0))
        g3 = float(_g3_quarter_core(b, n))
    else:
        raise ValueError(f"unknown criterion {which!r}")
    k = g3 / g2**2
    return Classicality(k=k, violated=bool(k < 1.0), g2=g2, g3=g3)


def quarter_delay_report(ideal: IdealParams):
    """g3 and K at ``pi / 2 delta``: the strict limit value next to the decayed Wick value."""
    tq = ideal.quarter_period
    g2_limit = float(_g2_core(ideal.beta, ideal.n_m, 1.0, -1.0))
    g3_limit = g3_quarter_closed(ideal)
    g2_decay = g2_closed(ideal, tq)
    g3_decay = g3_wick(ideal, tq)
    return {
        "g2_limit": g2_limit,
        "g3_limit": g3_limit,
        "k_limit": g3_limit / g2_limit**2,
        "g2_with_decay": g2_decay,
        "g3_with_decay": g3_decay,
        "k_with_decay": g3_decay / g2_decay**2,
    }


def delta_zero_coherences(params: SystemParams, tau) -> CoherenceSample:
    """Coherences when the two innermost sidebands coincide (delta = 0).

    The anomalous mechanical correlators then cancel the occupation dependence,
    so the ideal closed forms apply with ``n_m`` replaced by the bath
    occupation ``n_th``.  The rotating-wave validity (omega_m >> 1) is recorded
    in ``components["rwa_valid"]``.
    """
    if params.delta != 0:
        raise DomainError("delta_zero_coherences requires delta = 0")
    tau = float(_check_delays(tau))
    beta, n = params.beta, params.n_th
    if not math.isfinite(beta):
        raise DomainError("drive ratio undefined")
    gamma_eff = backaction(params, "corrected").gamma_eff
    g2 = float(_g2_core(beta, n, math.exp(-gamma_eff * tau), 1.0))
    g2_0 = float(_g2_core(beta, n, 1.0, 1.0))
    g3 = 9.0 * g2_0 - 12.0 if tau == 0 else None
    return CoherenceSample(
        tau=tau, g2=g2, g3=g3, k=None if g3 is None else g3 / g2**2, order="ideal",
        components={"n_effective": n, "gamma_eff": gamma_eff,
                    "rwa_valid": params.omega_m >= 10.0},
    )

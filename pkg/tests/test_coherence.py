import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sideband_stats import (
    K0_THRESHOLD_G2,
    DomainError,
    IdealParams,
    SystemParams,
    ZeroFluxError,
    af_anomalous_correlator,
    af_normal_correlator,
    backaction,
    cavity_susceptibility,
    classicality_check,
    coherence_curve,
    coherence_sample,
    delta_zero_coherences,
    g2_closed,
    g2_envelope,
    g2_wick,
    g3_quarter_closed,
    g3_wick,
    g3_zero_closed,
    k_equal_time,
    k_functional,
    k_quarter_delay,
    nm_from_g2,
    oscillation_amplitude,
    quarter_delay_report,
)
from sideband_stats.mechanics import (
    TwoTimeCorrelators,
    anomalous_correlator,
    antinormal_correlator,
    normal_correlator,
)

ideal_points = st.builds(
    IdealParams,
    beta=st.floats(0.0, 5.0),
    n_m=st.floats(1e-3, 5.0),
    gamma_eff=st.floats(1e-3, 0.1),
    delta=st.floats(0.1, 10.0),
)


class TestGaussianIdentities:
    @given(ideal_points, st.floats(0.0, 50.0))
    @settings(max_examples=200)
    def test_wick_matches_closed_g2(self, p, x):
        tau = x / p.delta
        assert g2_wick(p, tau) == pytest.approx(g2_closed(p, tau), rel=1e-12)

    @given(ideal_points)
    @settings(max_examples=200)
    def test_equal_time_g3(self, p):
        assert g3_wick(p, 0.0) == pytest.approx(9.0 * g2_wick(p, 0.0) - 12.0, rel=1e-12)
        assert g3_zero_closed(p) == pytest.approx(g3_wick(p, 0.0), rel=1e-12)

    @given(ideal_points, st.floats(0.0, 20.0))
    def test_oscillation_period(self, p, x):
        tau = x / p.delta
        period = math.pi / p.delta

        def osc(t):
            return (g2_closed(p, t) - 1.0 - math.exp(-p.gamma_eff_abs * t)) * math.exp(p.gamma_eff_abs * t)

        assert osc(tau + period) == pytest.approx(osc(tau), rel=1e-12, abs=1e-12)

    @given(ideal_points, st.floats(0.0, 20.0))
    def test_envelope_bounds(self, p, x):
        tau = x / p.delta
        decay = math.exp(-p.gamma_eff_abs * tau)
        g = g2_closed(p, tau)
        assert g2_envelope(p.beta, p.n_m, decay, -1.0) - 1e-12 <= g <= g2_envelope(p.beta, p.n_m, decay, 1.0) + 1e-12


class TestG2:
    @pytest.mark.parametrize("n_m", [0.01, 0.5, 2.0, 10.0])
    def test_beta_one_gives_three(self, n_m):
        assert g2_wick(IdealParams(1.0, n_m), 0.0) == pytest.approx(3.0, abs=1e-12)

    def test_single_tone_is_thermal(self):
        p = IdealParams(0.0, 0.7, gamma_eff=0.05)
        taus = np.linspace(0, 100, 100)
        assert np.allclose(g2_wick(p, taus), 1.0 + np.exp(-0.05 * taus), rtol=0, atol=1e-12)

    def test_near_k0_threshold(self):
        assert g2_wick(IdealParams(0.05, 0.054), 0.0) == pytest.approx(7.392, abs=5e-4)

    def test_quarter_delay_value(self):
        p = IdealParams(1.0, 0.1, gamma_eff=0.05)
        expected = 1 + math.exp(-0.025 * math.pi) * (1 + 4 * 0.14 / 1.44)
        assert g2_closed(p, p.quarter_period) == pytest.approx(expected, rel=1e-13)
        assert g2_closed(p, p.quarter_period) == pytest.approx(2.284, abs=1e-3)

    def test_ground_state_reduction(self):
        assert g2_closed(IdealParams(0.5, 0.0), 0.0) == pytest.approx(4.0)

    def test_classical_limit(self):
        assert g2_closed(IdealParams(1.0, 1e6), 0.0) == pytest.approx(3.0, rel=1e-9)

    @pytest.mark.parametrize("n_m", [0.1, 0.5, 2.0])
    def test_minima_at_odd_quarter_periods(self, n_m):
        p = IdealParams(1.0, n_m, gamma_eff=0.05)
        q = p.quarter_period
        taus = np.linspace(0, 8 * q, 8 * 20 + 1)
        g = g2_closed(p, taus)
        interior = np.flatnonzero((g[1:-1] < g[:-2]) & (g[1:-1] < g[2:])) + 1
        step = taus[1] - taus[0]
        assert len(interior) == 4
        for k, i in enumerate(interior):
            assert abs(taus[i] - (2 * k + 1) * q) <= step * (1 + 1e-9)

    def test_negative_delay_rejected(self):
        with pytest.raises(DomainError):
            g2_closed(IdealParams(1.0, 0.5), -0.1)


class TestAmplitudeAndInversion:
    def test_amplitude_examples(self):
        assert oscillation_amplitude(IdealParams(1.0, 0.0)) == 0.0
        assert oscillation_amplitude(IdealParams(0.0, 1.0)) == 0.0
        assert oscillation_amplitude(IdealParams(1.0, 0.5)) == pytest.approx(0.75)

    def test_ground_state_ratio(self):
        # n_m = 0 has no oscillation, so g2(pi/2delta) = g2(0) and the ratio is -1
        assert nm_from_g2(4.0, 4.0, 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_classical_limit_diverges(self):
        p = IdealParams(1.0, 1e3, gamma_eff=0.0)
        n = nm_from_g2(g2_closed(p, 0.0), g2_closed(p, p.quarter_period), 0.0)
        assert n == pytest.approx(1e3, rel=1e-6)

    def test_round_trip_example(self):
        p = IdealParams(0.3, 0.2, gamma_eff=0.01)
        n = nm_from_g2(g2_closed(p, 0.0), g2_closed(p, p.quarter_period), 0.01)
        assert n == pytest.approx(0.2, abs=1e-10)

    @given(st.floats(0.0, 5.0), st.sampled_from([0.1, 0.53, 1.0, 2.0]), st.floats(0.0, 0.1))
    @settings(max_examples=200)
    def test_round_trip(self, n_m, beta, x):
        p = IdealParams(beta, n_m, gamma_eff=x)
        back = nm_from_g2(g2_closed(p, 0.0), g2_closed(p, p.quarter_period), x)
        assert back == pytest.approx(n_m, abs=1e-10)

    def test_outside_range(self):
        with pytest.raises(DomainError):
            nm_from_g2(2.5, 1.0, 0.0)


class TestG3:
    def test_beta_one(self):
        assert g3_wick(IdealParams(1.0, 0.5), 0.0) == pytest.approx(15.0, rel=1e-12)

    def test_long_delay_factorizes(self):
        p = IdealParams(0.3, 0.4, gamma_eff=0.05)
        assert g3_wick(p, 2000.0) == pytest.approx(g2_closed(p, 0.0), rel=1e-12)

    def test_ground_state(self):
        assert g3_wick(IdealParams(0.05, 0.0), 0.0) == pytest.approx(186.0, rel=1e-12)

    def test_zero_closed_examples(self):
        assert g3_zero_closed(IdealParams(1.0, 0.3)) == pytest.approx(15.0, rel=1e-12)
        assert g3_zero_closed(IdealParams(0.0, 0.3)) == pytest.approx(6.0, rel=1e-12)

    def test_quarter_closed_examples(self):
        assert g3_quarter_closed(IdealParams(0.53, 0.0)) == pytest.approx(6 + (8 - 3 - 4) / 0.53, rel=1e-12)
        assert g3_quarter_closed(IdealParams(0.53, 0.0)) == pytest.approx(7.8868, abs=1e-4)
        assert g3_quarter_closed(IdealParams(0.53, 0.12)) == pytest.approx(6.099, abs=1e-3)

    def test_quarter_closed_is_limit_of_wick(self):
        p = IdealParams(0.53, 0.12, gamma_eff=1e-9)
        assert g3_wick(p, p.quarter_period) == pytest.approx(g3_quarter_closed(p), rel=1e-8)

    def test_quarter_report_labels_both(self):
        rep = quarter_delay_report(IdealParams(0.53, 0.12, gamma_eff=0.05))
        assert rep["g3_limit"] == pytest.approx(6.099, abs=1e-3)
        assert rep["g3_with_decay"] != pytest.approx(rep["g3_limit"], rel=1e-3)
        assert rep["k_limit"] == pytest.approx(rep["g3_limit"] / rep["g2_limit"] ** 2)


class TestK:
    def test_functional_examples(self):
        assert k_functional(15.0, 3.0) == pytest.approx(5.0 / 3.0)
        assert k_functional(7.8868, 3.8868) == pytest.approx(0.522, abs=1e-3)
        assert k_functional(6.099, 2.4813) == pytest.approx(0.9906, abs=1e-4)

    def test_threshold_is_boundary(self):
        g = K0_THRESHOLD_G2
        assert g == pytest.approx(7.372281323269014, rel=1e-15)
        assert 9 * g - 12 == pytest.approx(g**2, rel=1e-14)

    def test_quarter_delay_boundary(self):
        assert 0.98 < k_quarter_delay(0.53, 0.12) < 1.0

    def test_vectorized(self):
        betas = np.array([0.05, 0.5])
        assert k_equal_time(betas, 0.01).shape == (2,)

    def test_classicality_examples(self):
        for n_m in (0.0, 0.3, 5.0):
            assert not classicality_check(IdealParams(1.0, n_m), "equal_time").violated
        assert classicality_check(IdealParams(0.05, 0.03), "equal_time").violated
        assert not classicality_check(IdealParams(0.53, 0.3), "quarter_delay").violated
        with pytest.raises(ValueError):
            classicality_check(IdealParams(0.5, 0.1), "other")


def _system(delta=0.05, delta_c=0.0, gamma=1e-5, c_r=40.0, beta=0.25, n_th=1.0, omega_m=10.0):
    return SystemParams.from_cooperativities(gamma=gamma, omega_m=omega_m, delta=delta, c_r=c_r,
                                             beta=beta, n_th=n_th, delta_c=delta_c)


class TestFilteredCorrelators:
    def test_red_only_flux(self):
        p = SystemParams(gamma=1e-5, omega_m=10.0, delta=0.05, g_r=0.01, n_th=1.0)
        mech = TwoTimeCorrelators.from_derived(backaction(p, "corrected"), p.delta)
        val = af_normal_correlator(p, 0.0, "corrected", mech)
        expected = 0.01**2 * abs(cavity_susceptibility(0.05)) ** 2 * mech.n_m
        assert val == pytest.approx(expected, rel=1e-12)
        assert abs(val.imag) < 1e-18

    def test_blue_only_flux(self):
        p = SystemParams(gamma=1e-5, omega_m=10.0, delta=0.05, g_b=0.001, n_th=1.0)
        mech = TwoTimeCorrelators.from_derived(backaction(p, "corrected"), p.delta)
        val = af_normal_correlator(p, 0.0, "corrected", mech)
        expected = 0.001**2 * abs(cavity_susceptibility(-0.05)) ** 2 * (mech.n_m + 1)
        assert val == pytest.approx(expected, rel=1e-12)

    def test_ideal_phase(self):
        p = IdealParams(1.0, 0.5, gamma_eff=0.0)
        val = af_normal_correlator(p, p.quarter_period)
        assert val / abs(val) == pytest.approx(-1j, abs=1e-14)

    def test_anomalous_needs_both_drives(self):
        p = SystemParams(gamma=1e-5, omega_m=10.0, delta=0.05, g_r=0.01, n_th=1.0)
        assert af_anomalous_correlator(p, 3.0, "corrected") == 0

    def test_virtual_term_vanishes_at_zero_delta(self):
        p = _system(delta=0.0)
        mech = TwoTimeCorrelators(n_m=0.3, gamma_eff=1e-3)
        _, virtual = af_anomalous_correlator(p, 0.0, "corrected", mech, parts=True)
        assert virtual == 0

    def test_zero_flux(self):
        p = SystemParams(gamma=1e-5, omega_m=10.0, delta=0.05, g_r=0.01)
        with pytest.raises(ZeroFluxError):
            g2_wick(p, 0.0, "ideal", TwoTimeCorrelators(0.0, 1e-4))

    def test_corrected_needs_system_params(self):
        with pytest.raises(DomainError):
            g2_wick(IdealParams(1.0, 0.5), 0.0, "corrected")

    def test_ideal_order_system_matches_closed(self):
        p = _system()
        ideal = backaction(p, "ideal").to_ideal(p.delta)
        taus = np.linspace(0, 3 * math.pi / p.delta, 13)
        assert np.allclose(g2_wick(p, taus, "ideal"), g2_closed(ideal, taus), rtol=1e-12)


def _explicit_t_normal(p: IdealParams, mech: TwoTimeCorrelators, t, tau):
    """<a^dag(t+tau) a(t)> with absolute drive phases and the anomalous pairs attached."""
    cr, cb, d = 2.0, 2.0 * math.sqrt(p.beta), p.delta
    bb, bdbd = anomalous_correlator(mech, t, tau) if mech.include_anomalous else (0.0, 0.0)
    return (cr**2 * np.exp(1j * d * tau) * normal_correlator(mech, tau)
            + cb**2 * np.exp(-1j * d * tau) * antinormal_correlator(mech, tau)
            + cr * cb * np.exp(1j * d * (2 * t + tau)) * bdbd
            + cr * cb * np.exp(-1j * d * (2 * t + tau)) * bb)


def _explicit_t_g2(p: IdealParams, mech: TwoTimeCorrelators, t, tau):
    cr, cb, d = 2.0, 2.0 * math.sqrt(p.beta), p.delta
    n = _explicit_t_normal(p, mech, t, tau)
    m = cr * cb * (np.exp(-1j * d * tau) * antinormal_correlator(mech, tau)
                   + np.exp(1j * d * tau) * normal_correlator(mech, tau))
    return 1.0 + (abs(n) ** 2 + abs(m) ** 2) / (_explicit_t_normal(p, mech, t, 0.0).real
                                                 * _explicit_t_normal(p, mech, t + tau, 0.0).real)


class TestStationarity:
    @given(st.floats(0, 500), st.floats(0, 30))
    def test_explicit_time_matches_delay_only(self, t, tau):
        p = IdealParams(0.4, 0.3, gamma_eff=0.05)
        mech = TwoTimeCorrelators(p.n_m, p.gamma_eff_abs)
        assert _explicit_t_normal(p, mech, t, tau) == pytest.approx(af_normal_correlator(p, tau), rel=1e-10)
        assert _explicit_t_g2(p, mech, t, tau) == pytest.approx(g2_wick(p, tau), rel=1e-10)

    @given(st.floats(0, 500), st.floats(0, 30))
    def test_anomalous_phases_cancel(self, t, tau):
        p = IdealParams(0.4, 0.3, gamma_eff=0.05)
        mech = TwoTimeCorrelators(p.n_m, p.gamma_eff_abs, sigma_m=-0.01 + 0.2j, delta=p.delta,
                                  include_anomalous=True)
        ref = _explicit_t_normal(p, mech, 0.0, tau)
        assert _explicit_t_normal(p, mech, t, tau) == pytest.approx(ref, rel=1e-9, abs=1e-12)


class TestCorrectedOrder:
    def test_scaling_is_second_order(self):
        deltas = np.array([0.01, 0.02, 0.04, 0.08])
        diffs = []
        for delta in deltas:
            p = _system(delta=delta, gamma=1e-8, c_r=100.0, beta=0.25, n_th=0.1)
            mech = TwoTimeCorrelators.from_derived(backaction(p, "ideal"), delta, include_anomalous=False)
            mech_c = TwoTimeCorrelators(mech.n_m, mech.gamma_eff, backaction(p, "corrected").sigma_m,
                                        delta, include_anomalous=True)
            diffs.append(abs(g2_wick(p, 0.0, "corrected", mech_c) - g2_wick(p, 0.0, "ideal", mech)))
        slope = np.polyfit(np.log(deltas), np.log(diffs), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.3)

    def test_sample_components(self):
        s = coherence_sample(_system(), 1.0, "corrected")
        assert set(s.components) >= {"normal", "anomalous", "flux"}
        assert s.k == pytest.approx(s.g3 / s.g2**2)


class TestCurves:
    def test_curve_shape(self):
        p = IdealParams(1.0, 0.5)
        c = coherence_curve(p, np.linspace(0, 5, 6))
        assert c.taus.shape == c.g2.shape == c.g3.shape == (6,)

    def test_curve_must_start_at_zero(self):
        with pytest.raises(DomainError):
            coherence_curve(IdealParams(1.0, 0.5), [0.5, 1.0])

    def test_curve_must_increase(self):
        with pytest.raises(DomainError):
            coherence_curve(IdealParams(1.0, 0.5), [0.0, 1.0, 1.0])


class TestDeltaZero:
    def _p(self, beta, n_th, c_r=50.0):
        return SystemParams.from_cooperativities(gamma=1e-5, omega_m=20.0, delta=0.0, c_r=c_r, beta=beta, n_th=n_th)

    def test_beta_one(self):
        assert delta_zero_coherences(self._p(1.0, 0.5), 0.0).g2 == pytest.approx(3.0)

    def test_single_drive_thermal(self):
        p = self._p(0.0, 2.0)
        s = delta_zero_coherences(p, 30.0)
        gamma_eff = s.components["gamma_eff"]
        assert s.g2 == pytest.approx(1 + math.exp(-gamma_eff * 30.0))

    def test_cooling_does_not_help(self):
        a = delta_zero_coherences(self._p(0.3, 1.0, c_r=10.0), 0.0)
        b = delta_zero_coherences(self._p(0.3, 1.0, c_r=1e3), 0.0)
        assert a.g2 == pytest.approx(b.g2, rel=1e-14)
        assert a.components["n_effective"] == 1.0

    def test_requires_zero_delta(self):
        with pytest.raises(DomainError):
            delta_zero_coherences(_system(), 0.0)

"""``sideband-stats`` command line.

Exit codes: 0 success, 2 configuration error, 3 physics-domain error
such as instability or truncation, 4 tolerance failure.
Data go to ``--out`` (or stdout); human-readable summaries go to stderr.
"""

from __future__ import annotations

import argparse
import itertools
import math
import sys

import numpy as np

from . import coherence as coh
from .config import load_config
from .errors import ConfigError, DomainError, SidebandError, ToleranceError, TruncationError
from .filters import FilterParams, filtered_noise_weight, output_coefficients, passband_distortion
from .io import csv_text, json_text, write_text
from .model import IdealParams, SystemParams, backaction, two_phonon_drive_ratio
from .oracle.coherences import DimPolicy, oracle_coherences
from .scan import GridSpec, parallel_map, region_scan

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_TOLERANCE = 0, 2, 3, 4


def _note(msg):
    print(msg, file=sys.stderr)


def _overrides(args, with_params=True):
    keys = ["criterion", "axes", "out", "tau_max", "points"]
    if with_params:
        keys += ["beta", "nm", "gamma_eff", "delta"]
    else:
        keys += ["delta"]
    out = {k: getattr(args, k, None) for k in keys}
    if "nm" in out:
        out["n_m"] = out.pop("nm")
    return out


# -- derive --------------------------------------------------------------------

def cmd_derive(args):
    cfg = load_config(args.config, _overrides(args))
    p = cfg.params
    if isinstance(p, IdealParams):
        eq = coh.classicality_check(p, "equal_time")
        qd = coh.classicality_check(p, "quarter_delay")
        report = {
            "mode": "ideal",
            "inputs": p.as_dict(),
            "gamma_eff_abs": p.gamma_eff_abs,
            "quarter_period": p.quarter_period,
            "oscillation_amplitude": coh.oscillation_amplitude(p),
            "g2_zero": eq.g2,
            "k_equal_time": eq.k,
            "k_quarter_delay": qd.k,
            "flags": {"ok": True, "equal_time_violated": eq.violated,
                      "quarter_delay_violated": qd.violated},
        }
    else:
        ideal = backaction(p, "ideal")
        corrected = backaction(p, "corrected")
        hierarchy = p.hierarchy_flags()
        mu = two_phonon_drive_ratio(p) if p.delta > 0 else None
        report = {
            "mode": "physical",
            "inputs": p.as_dict(),
            "ideal": ideal.as_dict(),
            "corrected": corrected.as_dict(),
            "hierarchy": hierarchy,
            "mu_ratio": mu,
            "flags": {"stable": True, "hierarchy_ok": all(hierarchy.values()),
                      "mu_ratio_small": mu is not None and mu < 0.1},
        }
    write_text(json_text(report, cfg.config_hash), cfg.output["path"])
    return EXIT_OK


# -- g2-curve ------------------------------------------------------------------

def quarter_grid(delta, tau_max, points):
    """Delay grid on ``[0, tau_max]`` that contains every multiple of ``pi / 2 delta``.

    ``tau_max`` is rounded to the nearest whole number of quarter periods
    (at least one) and the point count rounded up so each quarter period has
    the same number of steps.
    """
    q = math.pi / (2.0 * delta)
    n_q = max(1, int(round(tau_max / q)))
    per_q = max(1, int(math.ceil((points - 1) / n_q)))
    return np.linspace(0.0, n_q * q, n_q * per_q + 1)


def cmd_g2_curve(args):
    cfg = load_config(args.config, _overrides(args))
    p = cfg.params
    if p.delta <= 0:
        raise DomainError("g2-curve needs delta > 0")
    tau_max = cfg.scan["tau_max"] or 10.0 * math.pi / p.delta
    taus = quarter_grid(p.delta, tau_max, cfg.scan["points"])
    if isinstance(p, IdealParams):
        ideal = p
        columns = [coh.g2_closed(ideal, taus)]
        header = ["tau", "g2_ideal"]
    else:
        ideal = backaction(p, "ideal").to_ideal(p.delta)
        backaction(p, "corrected")  # surfaces instability before any output
        columns = [coh.g2_wick(p, taus, "ideal"), coh.g2_wick(p, taus, "corrected")]
        header = ["tau", "g2_ideal", "g2_corrected"]
    # the oscillation cos(2 delta tau) pinned at +-1 bounds the decaying curve
    decay = np.exp(-ideal.gamma_eff_abs * taus)
    upper = coh.g2_envelope(ideal.beta, ideal.n_m, decay, +1.0)
    lower = coh.g2_envelope(ideal.beta, ideal.n_m, decay, -1.0)
    rows = zip(taus, *columns, upper, lower)
    header = header + ["envelope_upper", "envelope_lower"]
    write_text(csv_text(header, rows, cfg.config_hash), cfg.output["path"])
    return EXIT_OK


# -- g3-points -----------------------------------------------------------------

def cmd_g3_points(args):
    cfg = load_config(args.config, _overrides(args))
    p = cfg.params
    if p.delta <= 0:
        raise DomainError("g3-points needs delta > 0")
    tq = math.pi / (2.0 * p.delta)
    rows = []
    if isinstance(p, IdealParams):
        undamped = IdealParams(p.beta, p.n_m, 0.0, p.delta)
        for tau, g3 in ((0.0, coh.g3_zero_closed(p)), (tq, coh.g3_quarter_closed(p))):
            g2 = coh.g2_closed(undamped, tau)
            rows.append(("limit", tau, g2, g3, g3 / g2**2))
        for tau in (0.0, tq):
            g2, g3 = coh.g2_closed(p, tau), coh.g3_wick(p, tau)
            rows.append(("ideal", tau, g2, g3, g3 / g2**2))
    else:
        for order in ("ideal", "corrected"):
            for tau in (0.0, tq):
                g2, g3 = coh.g2_wick(p, tau, order), coh.g3_wick(p, tau, order)
                rows.append((order, tau, g2, g3, g3 / g2**2))
    header = ["order", "tau", "g2", "g3", "k"]
    write_text(csv_text(header, rows, cfg.config_hash), cfg.output["path"])
    return EXIT_OK


# -- region --------------------------------------------------------------------

def cmd_region(args):
    cfg = load_config(args.config, _overrides(args, with_params=False), require_params=False)
    scan = cfg.scan
    beta_grid = GridSpec("beta", **scan["beta"]) if "beta" in scan else None
    x_grid = GridSpec(scan["axes"], **scan["x"]) if "x" in scan else None
    rmap = region_scan(scan["criterion"], scan["axes"], beta_grid, x_grid)
    write_text(json_text(rmap.as_dict(), cfg.config_hash), cfg.output["path"])
    if rmap.optimum is None:
        _note("no violation region inside the grid")
    else:
        _note(f"optimum: beta={rmap.optimum['beta']:.6g} threshold={rmap.optimum['threshold']:.6g}")
    return EXIT_OK


# -- oracle-compare ------------------------------------------------------------

def _compare_point(point, gamma_eff, policy):
    beta, n_m = point
    ideal = IdealParams(beta=beta, n_m=n_m, gamma_eff=gamma_eff, delta=1.0)
    tq = ideal.quarter_period
    taus = np.array([0.0, tq, 2.0 * tq])
    g2c = coh.g2_closed(ideal, taus)
    g3c = np.array([coh.g3_zero_closed(ideal), coh.g3_wick(ideal, tq)])
    closed = {"g2(0)": g2c[0], "g2(pi/2delta)": g2c[1], "g2(pi/delta)": g2c[2],
              "g3(0)": g3c[0], "g3(pi/2delta)": g3c[1],
              "K(0)": g3c[0] / g2c[0] ** 2, "K(pi/2delta)": g3c[1] / g2c[1] ** 2}
    try:
        curve = oracle_coherences(ideal, taus, policy)
    except TruncationError as exc:
        return [(beta, n_m, q, v, float("nan"), float("nan"), "truncation", 0) for q, v in closed.items()], str(exc)
    g2o, g3o = curve.g2, curve.g3
    oracle = {"g2(0)": g2o[0], "g2(pi/2delta)": g2o[1], "g2(pi/delta)": g2o[2],
              "g3(0)": g3o[0], "g3(pi/2delta)": g3o[1],
              "K(0)": g3o[0] / g2o[0] ** 2, "K(pi/2delta)": g3o[1] / g2o[1] ** 2}
    dim = curve.limits_metadata["dim"]
    rows = []
    for q, v in closed.items():
        o = oracle[q]
        rows.append((beta, n_m, q, v, o, abs(o - v) / abs(v), "ok", dim))
    return rows, None


def cmd_oracle_compare(args):
    cfg = load_config(args.config, _overrides(args, with_params=False), require_params=False)
    if cfg.mode == "physical":
        raise ConfigError("oracle-compare needs an ideal-limit config")
    orc = cfg.oracle
    betas = [args.beta] if args.beta is not None else orc["betas"]
    n_ms = [args.nm] if args.nm is not None else orc["n_ms"]
    gamma_eff = args.gamma_eff if args.gamma_eff is not None else orc["gamma_eff"]
    tol = cfg.tolerances
    policy = DimPolicy(tol=tol["oracle_convergence"], tail_threshold=tol["tail_population"])
    points = list(itertools.product(betas, n_ms))
    results = parallel_map(lambda pt: _compare_point(pt, gamma_eff, policy), points)
    rows, errors = [], []
    for r, err in results:
        rows.extend(r)
        if err:
            errors.append(err)
    header = ["beta", "n_m", "quantity", "closed_form", "oracle", "rel_err", "status", "dim"]
    write_text(csv_text(header, rows, cfg.config_hash), cfg.output["path"])
    for err in errors:
        _note(f"truncation: {err}")
    worst = max((r[5] for r in rows if r[6] == "ok"), default=0.0)
    _note(f"max rel_err = {worst:.3g} (bound {tol['oracle_rel']:g})")
    if errors:
        return EXIT_DOMAIN
    if worst > tol["oracle_rel"]:
        return EXIT_TOLERANCE
    return EXIT_OK


# -- filter-response -----------------------------------------------------------

def cmd_filter_response(args):
    cfg = load_config(args.config, _overrides(args, with_params=False), require_params=False)
    f = cfg.filter
    delta = cfg.delta
    b = f["b_over_delta"] * delta
    delta_c = cfg.params.delta_c if isinstance(cfg.params, SystemParams) else 0.0
    fp = FilterParams(b_total=b, b_left=f["b_left_fraction"] * b, kappa_right=f["kappa_right"], delta_c=delta_c)
    omegas = np.linspace(-f["span"] * b, f["span"] * b, f["points"]) - delta_c
    coef = output_coefficients(omegas, fp)
    weight = filtered_noise_weight(omegas, fp, f["stages"])
    chi = 1.0 / (b / 2.0 - 1j * (omegas + delta_c))
    residual = np.abs(fp.b_right * chi - 1.0) ** 2 + fp.b_left * fp.b_right * np.abs(chi) ** 2 - 1.0
    rows = zip(omegas, weight, np.abs(coef["on_a"]) ** 2, np.abs(coef["on_a_inR"]) ** 2,
               np.abs(coef["on_c_inR"]) ** 2, residual)
    header = ["omega", "weight", "on_a_abs2", "on_a_inR_abs2", "on_c_inR_abs2", "identity_residual"]
    write_text(csv_text(header, rows, cfg.config_hash), cfg.output["path"])
    _note(f"passband distortion at +-delta: {passband_distortion(fp, delta, f['stages']):.6g}")
    if isinstance(cfg.params, SystemParams):
        _note(f"hierarchy delta << B << kappa, omega_m: {fp.hierarchy_ok(delta, cfg.params.omega_m)}")
    return EXIT_OK


COMMANDS = {
    "derive": (cmd_derive, "derived quantities and validity flags (JSON)"),
    "g2-curve": (cmd_g2_curve, "g2(tau) curve with decay envelope (CSV)"),
    "g3-points": (cmd_g3_points, "g2, g3 and K at tau = 0 and pi/2delta (CSV)"),
    "region": (cmd_region, "classicality-violation region and optimum (JSON)"),
    "oracle-compare": (cmd_oracle_compare, "closed forms against the Fock-space oracle (CSV)"),
    "filter-response": (cmd_filter_response, "filter-cavity transfer functions (CSV)"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML run configuration")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--beta", type=float, help="drive ratio G_b^2 / G_r^2")
    common.add_argument("--nm", type=float, help="mechanical occupation n_m")
    common.add_argument("--gamma-eff", type=float, help="effective linewidth in units of delta")
    common.add_argument("--delta", type=float, help="two-tone detuning delta (units of kappa)")
    common.add_argument("--criterion", choices=["k0", "kdelay"], help="region criterion")
    common.add_argument("--axes", choices=["nm", "nm0"], help="region occupation axis")
    common.add_argument("--tau-max", type=float, help="g2-curve delay range")
    common.add_argument("--points", type=int, help="g2-curve point count")

    parser = argparse.ArgumentParser(prog="sideband-stats", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    func = COMMANDS[args.command][0]
    try:
        return func(args)
    except ConfigError as exc:
        _note(f"config error: {exc}")
        return EXIT_CONFIG
    except ToleranceError as exc:
        _note(f"tolerance failure: {exc}")
        return EXIT_TOLERANCE
    except (SidebandError, ValueError) as exc:
        _note(f"error: {exc}")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

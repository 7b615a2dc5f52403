"""Run configuration: a TOML file plus command-line overrides.

A config holds at most one parameter block, ``[ideal]`` or ``[physical]``,
and optional ``[scan]``, ``[oracle]``, ``[filter]``, ``[output]`` and
``[tolerances]`` sections.  Defaults are filled in before hashing, so the
hash identifies the effective run, not the file text.

Example::

    [ideal]
    beta = 1.0
    n_m = 0.5
    gamma_eff = 0.05   # in units of delta

    [scan]
    criterion = "kdelay"
    axes = "nm"
    beta = { min = 0.001, max = 3.0, points = 61, scale = "log" }
"""

from __future__ import annotations

import copy
import hashlib
import json
import sys
from dataclasses import dataclass
from typing import Optional, Union

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError, DomainError
from .model import IdealParams, SystemParams

IDEAL_KEYS = {"beta", "n_m", "gamma_eff", "delta"}
PHYSICAL_KEYS = {"gamma", "omega_m", "delta", "delta_c", "g_r", "g_b", "c_r", "beta", "n_th"}
GRID_KEYS = {"min", "max", "points", "scale"}

DEFAULTS = {
    "scan": {"criterion": "kdelay", "axes": "nm", "tau_max": None, "points": 401},
    "oracle": {"betas": [0.05, 0.3, 1.0], "n_ms": [0.05, 0.3, 1.0], "gamma_eff": 0.05},
    "filter": {"delta": None, "b_over_delta": 50.0, "b_left_fraction": 0.5, "kappa_right": 1.0,
               "stages": 1, "span": 5.0, "points": 201},
    "output": {"path": None},
    "tolerances": {"oracle_rel": 1e-6, "oracle_convergence": 1e-8, "tail_population": 1e-4},
}
SECTION_KEYS = {
    "ideal": IDEAL_KEYS,
    "physical": PHYSICAL_KEYS,
    "scan": set(DEFAULTS["scan"]) | {"beta", "x"},
    "oracle": set(DEFAULTS["oracle"]),
    "filter": set(DEFAULTS["filter"]),
    "output": set(DEFAULTS["output"]),
    "tolerances": set(DEFAULTS["tolerances"]),
}


@dataclass(frozen=True)
class RunConfig:
    """Validated, defaults-filled configuration.

    ``params`` is None only when the file has no parameter block and the
    command does not need one.
    """

    mode: Optional[str]
    params: Optional[Union[IdealParams, SystemParams]]
    scan: dict
    oracle: dict
    filter: dict
    output: dict
    tolerances: dict
    effective: dict

    @property
    def config_hash(self):
        text = json.dumps(self.effective, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    @property
    def delta(self):
        """Two-tone detuning: from the parameter block, else ``[filter] delta``, else 1."""
        if self.params is not None:
            return self.params.delta
        return self.filter["delta"] if self.filter["delta"] is not None else 1.0


def _read(path):
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None


def _check_keys(section, data, allowed):
    if not isinstance(data, dict):
        raise ConfigError(f"[{section}] must be a table")
    extra = set(data) - allowed
    if extra:
        raise ConfigError(f"unknown keys in [{section}]: {sorted(extra)}")


def _number(section, key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{section}] {key} must be a number, got {value!r}")
    return float(value)


def _apply_overrides(raw, overrides):
    ideal_over = {k: overrides[k] for k in ("beta", "n_m", "gamma_eff") if overrides.get(k) is not None}
    delta = overrides.get("delta")
    if "physical" in raw:
        phys = raw["physical"]
        if "n_m" in ideal_over or "gamma_eff" in ideal_over:
            raise ConfigError("--nm and --gamma-eff apply to an [ideal] block, config has [physical]")
        if "beta" in ideal_over:
            if "c_r" not in phys:
                raise ConfigError("--beta on a [physical] block needs c_r/beta couplings")
            phys["beta"] = ideal_over["beta"]
        if delta is not None:
            phys["delta"] = delta
    elif ideal_over or "ideal" in raw:
        block = raw.setdefault("ideal", {})
        block.update(ideal_over)
        if delta is not None:
            block["delta"] = delta
    elif delta is not None:
        raw.setdefault("filter", {})["delta"] = delta
    scan = raw.setdefault("scan", {})
    for key in ("criterion", "axes", "tau_max", "points"):
        if overrides.get(key) is not None:
            scan[key] = overrides[key]
    if overrides.get("out") is not None:
        raw.setdefault("output", {})["path"] = overrides["out"]


def _ideal_params(block):
    for key in ("beta", "n_m"):
        if key not in block:
            raise ConfigError(f"[ideal] needs {key}")
    vals = {k: _number("ideal", k, v) for k, v in block.items()}
    vals.setdefault("gamma_eff", 0.05)
    vals.setdefault("delta", 1.0)
    return IdealParams(**vals), vals


def _physical_params(block):
    vals = {k: _number("physical", k, v) for k, v in block.items()}
    for key in ("gamma", "omega_m", "delta"):
        if key not in vals:
            raise ConfigError(f"[physical] needs {key}")
    has_g = "g_r" in vals or "g_b" in vals
    has_c = "c_r" in vals or "beta" in vals
    if has_g == has_c:
        raise ConfigError("[physical] needs either g_r/g_b or c_r/beta, not both")
    vals.setdefault("n_th", 0.0)
    vals.setdefault("delta_c", 0.0)
    if has_c:
        if "c_r" not in vals or "beta" not in vals:
            raise ConfigError("[physical] needs both c_r and beta")
        params = SystemParams.from_cooperativities(
            gamma=vals["gamma"], omega_m=vals["omega_m"], delta=vals["delta"], c_r=vals["c_r"],
            beta=vals["beta"], n_th=vals["n_th"], delta_c=vals["delta_c"])
    else:
        vals.setdefault("g_r", 0.0)
        vals.setdefault("g_b", 0.0)
        params = SystemParams(**vals)
    return params, vals


def _grid(section, key, spec):
    _check_keys(f"{section}.{key}", spec, GRID_KEYS)
    missing = {"min", "max", "points"} - set(spec)
    if missing:
        raise ConfigError(f"[{section}] {key} grid needs {sorted(missing)}")
    points = spec["points"]
    if isinstance(points, bool) or not isinstance(points, int):
        raise ConfigError(f"[{section}] {key}.points must be an integer")
    return {"min": _number(section, "min", spec["min"]), "max": _number(section, "max", spec["max"]),
            "points": points, "scale": spec.get("scale", "log")}


def load_config(path=None, overrides=None, require_params=True) -> RunConfig:
    """Read ``path`` (optional), apply ``overrides`` and validate.

    ``overrides`` keys: ``beta``, ``n_m``, ``gamma_eff``, ``delta``,
    ``criterion``, ``axes``, ``tau_max``, ``points``, ``out``;
    None values are ignored.  Flags win over the file.

    Raises
    ------
    ConfigError
        On unreadable files, unknown or missing keys, both parameter blocks,
        non-positive tolerances, or parameters outside their domain.
    """
    raw = copy.deepcopy(_read(path)) if path is not None else {}
    unknown = set(raw) - set(SECTION_KEYS)
    if unknown:
        raise ConfigError(f"unknown sections: {sorted(unknown)}")
    if "ideal" in raw and "physical" in raw:
        raise ConfigError("config must hold exactly one of [ideal] or [physical]")
    _apply_overrides(raw, overrides or {})
    for section, data in raw.items():
        _check_keys(section, data, SECTION_KEYS[section])

    effective = {}
    mode = params = None
    try:
        if "ideal" in raw:
            mode = "ideal"
            params, effective["ideal"] = _ideal_params(raw["ideal"])
        elif "physical" in raw:
            mode = "physical"
            params, effective["physical"] = _physical_params(raw["physical"])
    except DomainError as exc:
        raise ConfigError(f"invalid parameters: {exc}") from None
    if params is None and require_params:
        raise ConfigError("no parameter block: give [ideal] or [physical], or --beta and --nm")

    sections = {}
    for name, defaults in DEFAULTS.items():
        merged = dict(defaults)
        merged.update(raw.get(name, {}))
        sections[name] = merged
    scan = sections["scan"]
    for key in ("beta", "x"):
        if key in scan:
            scan[key] = _grid("scan", key, scan[key])
    if scan["criterion"] not in ("k0", "kdelay") or scan["axes"] not in ("nm", "nm0"):
        raise ConfigError("[scan] criterion must be k0 or kdelay, axes nm or nm0")
    if not isinstance(scan["points"], int) or scan["points"] < 2:
        raise ConfigError("[scan] points must be an integer >= 2")
    if scan["tau_max"] is not None and not _number("scan", "tau_max", scan["tau_max"]) > 0:
        raise ConfigError("[scan] tau_max must be > 0")
    for key, value in sections["tolerances"].items():
        if not _number("tolerances", key, value) > 0:
            raise ConfigError(f"[tolerances] {key} must be > 0")
    flt = sections["filter"]
    if flt["delta"] is not None and not _number("filter", "delta", flt["delta"]) > 0:
        raise ConfigError("[filter] delta must be > 0")
    for key in ("b_over_delta", "kappa_right", "span"):
        if not _number("filter", key, flt[key]) > 0:
            raise ConfigError(f"[filter] {key} must be > 0")
    if not 0 < _number("filter", "b_left_fraction", flt["b_left_fraction"]) < 1:
        raise ConfigError("[filter] b_left_fraction must lie in (0, 1)")
    for key in ("stages", "points"):
        if not isinstance(flt[key], int) or flt[key] < (1 if key == "stages" else 2):
            raise ConfigError(f"[filter] {key} must be an integer >= {1 if key == 'stages' else 2}")
    orc = sections["oracle"]
    for key in ("betas", "n_ms"):
        if not isinstance(orc[key], list) or not orc[key]:
            raise ConfigError(f"[oracle] {key} must be a non-empty list")
        orc[key] = [_number("oracle", key, v) for v in orc[key]]
    if not _number("oracle", "gamma_eff", orc["gamma_eff"]) > 0:
        raise ConfigError("[oracle] gamma_eff must be > 0")

    effective.update({k: v for k, v in sections.items() if k != "output"})
    return RunConfig(mode=mode, params=params, scan=scan, oracle=orc, filter=flt,
                     output=sections["output"], tolerances=sections["tolerances"], effective=effective)

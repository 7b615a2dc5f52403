"""Classicality-violation regions over (beta, occupation) grids.

Each row of a region map fixes the drive ratio ``beta`` and scans either the
phonon number ``n_m`` or the intrinsic-cooling occupation ``n_m0`` (mapped
through ``n_m = (n_m0 + beta) / (1 - beta)``).  The K functionals are the
ideal-limit ones with the delay decay neglected.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .coherence import k_equal_time, k_quarter_delay
from .errors import DomainError, ToleranceError
from .model import nm_from_nm0

CRITERIA = {"k0": k_equal_time, "kdelay": k_quarter_delay}
AXES = ("nm", "nm0")
THRESHOLD_XTOL = 1e-6


@dataclass(frozen=True)
class GridSpec:
    name: str
    min: float
    max: float
    points: int
    scale: str = "log"

    def __post_init__(self):
        if self.scale not in ("lin", "log"):
            raise DomainError(f"grid scale must be 'lin' or 'log', got {self.scale!r}")
        if self.points < 2 or not self.max > self.min:
            raise DomainError(f"grid {self.name!r} needs points >= 2 and max > min")
        if self.scale == "log" and not self.min > 0:
            raise DomainError(f"log grid {self.name!r} needs min > 0")

    def values(self):
        if self.scale == "log":
            v = np.geomspace(self.min, self.max, self.points)
        else:
            v = np.linspace(self.min, self.max, self.points)
        if np.any(np.diff(v) <= 0):
            raise DomainError(f"grid {self.name!r} is not strictly increasing")
        return v

    def as_dict(self):
        return {"name": self.name, "min": self.min, "max": self.max,
                "points": self.points, "scale": self.scale}


DEFAULT_BETA_GRID = GridSpec("beta", 1e-3, 3.0, 61, "log")
DEFAULT_BETA_GRID_NM0 = GridSpec("beta", 1e-3, 0.9, 61, "log")
DEFAULT_NM_GRID = GridSpec("nm", 1e-4, 1.0, 81, "log")
DEFAULT_NM0_GRID = GridSpec("nm0", 1e-4, 1.0, 81, "log")


def k_on_axis(criterion, beta, x, axes="nm"):
    """K as a function of ``beta`` and the scanned occupation ``x``."""
    if criterion not in CRITERIA:
        raise DomainError(f"criterion must be one of {sorted(CRITERIA)}, got {criterion!r}")
    if axes == "nm":
        n_m = x
    elif axes == "nm0":
        n_m = nm_from_nm0(x, beta)
    else:
        raise DomainError(f"axes must be one of {AXES}, got {axes!r}")
    return CRITERIA[criterion](beta, n_m)


def _crossing(criterion, beta, xs, axes):
    """Refined K = 1 crossing along one row, or None if the row never crosses."""
    excess = np.asarray(k_on_axis(criterion, beta, xs, axes)) - 1.0
    sign = np.sign(excess)
    idx = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    idx = np.union1d(idx, np.flatnonzero(sign == 0))
    if len(idx) == 0:
        return None
    if len(idx) > 1:
        raise ToleranceError(f"multiple K = 1 crossings at beta={beta:.6g}; refine the grid")
    j = int(idx[0])
    if excess[j] == 0:
        return float(xs[j])

    def f(x):
        return float(k_on_axis(criterion, beta, x, axes)) - 1.0

    root = brentq(f, xs[j], xs[j + 1], xtol=THRESHOLD_XTOL * 1e-3, rtol=1e-15)
    lo, hi = max(root - THRESHOLD_XTOL, xs[0]), min(root + THRESHOLD_XTOL, xs[-1])
    if not f(lo) * f(hi) < 0:
        raise ToleranceError(f"threshold at beta={beta:.6g} is not bracketed to {THRESHOLD_XTOL:g}")
    return float(root)


@dataclass(frozen=True)
class RegionMap:
    """K over a (beta, occupation) grid with per-row refined thresholds.

    ``thresholds[i]`` is the scanned-variable value where K crosses 1 in row
    ``i`` (None if it does not cross inside the grid); violation lies below it.
    """

    criterion: str
    axes: str
    axis1: GridSpec
    axis2: GridSpec
    values: np.ndarray
    violated: np.ndarray
    thresholds: tuple
    optimum: Optional[dict]

    def __post_init__(self):
        if not np.array_equal(self.violated, self.values < 1.0):
            raise DomainError("violated must equal values < 1")

    def as_dict(self):
        return {
            "criterion": self.criterion,
            "axes": self.axes,
            "axis1": self.axis1.as_dict(),
            "axis2": self.axis2.as_dict(),
            "axis1_values": self.axis1.values().tolist(),
            "axis2_values": self.axis2.values().tolist(),
            "values": self.values.tolist(),
            "violated": self.violated.tolist(),
            "thresholds": list(self.thresholds),
            "optimum": self.optimum,
        }


def worker_count():
    """Thread cap from ``SIDEBAND_STATS_THREADS``, else the CPU count."""
    env = os.environ.get("SIDEBAND_STATS_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise DomainError(f"SIDEBAND_STATS_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise DomainError("SIDEBAND_STATS_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def parallel_map(func, items, workers=None):
    """``map`` over a thread pool, results in input order."""
    items = list(items)
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def region_scan(criterion="kdelay", axes="nm", beta_grid: GridSpec = None,
                x_grid: GridSpec = None, workers=None, refine=True) -> RegionMap:
    """Scan K over the grid, refine per-row thresholds and locate the optimum.

    The optimum is the largest threshold over ``beta``.  With ``refine`` it is
    polished by a bounded scalar search between the grid neighbours of the
    best row.
    """
    if axes not in AXES:
        raise DomainError(f"axes must be one of {AXES}, got {axes!r}")
    if criterion not in CRITERIA:
        raise DomainError(f"criterion must be one of {sorted(CRITERIA)}, got {criterion!r}")
    if axes == "nm":
        beta_grid = beta_grid or DEFAULT_BETA_GRID
        x_grid = x_grid or DEFAULT_NM_GRID
    else:
        beta_grid = beta_grid or DEFAULT_BETA_GRID_NM0
        x_grid = x_grid or DEFAULT_NM0_GRID
    betas = beta_grid.values()
    xs = x_grid.values()
    if axes == "nm0" and betas[-1] >= 1.0:
        raise DomainError("nm0 axes need every beta < 1")

    def row(beta):
        k = np.asarray(k_on_axis(criterion, beta, xs, axes), dtype=float)
        return k, _crossing(criterion, beta, xs, axes)

    rows = parallel_map(row, betas, workers)
    values = np.array([r[0] for r in rows])
    thresholds = tuple(r[1] for r in rows)

    optimum = None
    found = [(t, i) for i, t in enumerate(thresholds) if t is not None]
    if found:
        t_best, i = max(found)
        beta_best = float(betas[i])
        if refine:
            lo, hi = betas[max(i - 1, 0)], betas[min(i + 1, len(betas) - 1)]

            def neg_threshold(b):
                t = _crossing(criterion, b, xs, axes)
                return -(t if t is not None else 0.0)

            res = minimize_scalar(neg_threshold, bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-9})
            if -res.fun >= t_best:
                beta_best, t_best = float(res.x), float(-res.fun)
        optimum = {"beta": beta_best, "threshold": t_best}

    return RegionMap(criterion=criterion, axes=axes, axis1=beta_grid, axis2=x_grid,
                     values=values, violated=values < 1.0, thresholds=thresholds, optimum=optimum)

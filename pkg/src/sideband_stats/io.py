"""Deterministic CSV and JSON writers.

CSV files start with ``# config_hash=<sha256>``, then a header row; floats
are written with 17 significant digits so they round-trip exactly.  JSON is
written with sorted keys, NaN and infinities mapped to null.
"""

from __future__ import annotations

import json
import math
import sys
from contextlib import contextmanager

import numpy as np


def format_value(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    return str(x)


def csv_text(header, rows, config_hash):
    lines = [f"# config_hash={config_hash}", ",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row has {len(row)} fields, header has {len(header)}")
        lines.append(",".join(format_value(x) for x in row))
    return "\n".join(lines) + "\n"


def read_csv(path):
    """Return ``(config_hash, header, rows)`` with numeric fields parsed as float."""
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if not first.startswith("# config_hash="):
            raise ValueError("missing config_hash line")
        header = fh.readline().rstrip("\n").split(",")
        rows = []
        for line in fh:
            fields = []
            for f in line.rstrip("\n").split(","):
                try:
                    fields.append(float(f))
                except ValueError:
                    fields.append(f)
            rows.append(fields)
    return first.split("=", 1)[1], header, rows


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def json_text(obj, config_hash):
    payload = {"config_hash": config_hash, "data": _jsonable(obj)}
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"


@contextmanager
def _sink(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def write_text(text, path=None):
    """Write to ``path``, or stdout when ``path`` is None or ``-``."""
    with _sink(path) as fh:
        fh.write(text)

"""CSV and JSON serialization with atomic writes.

CSV layout: header ``t,path_0,...,path_{m-1}``, one row per grid time,
floats written with 17 significant digits, LF line endings.
"""

from __future__ import annotations

import json
import math
import os
import tempfile

import numpy as np


def atomic_write(path, data):
    """Write ``data`` (str or bytes) to ``path`` through a temp file and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"newline": "", "encoding": "utf-8"})) as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _fmt(x):
    return format(float(x), ".17g")


def paths_to_csv(times, paths):
    """Render ``paths`` (n_paths x n_times) as CSV text."""
    times = np.asarray(times, dtype=float)
    paths = np.asarray(paths, dtype=float).reshape(-1, times.size)
    header = ",".join(["t"] + [f"path_{i}" for i in range(paths.shape[0])])
    cols = np.column_stack([times, paths.T])
    lines = [header] + [",".join(_fmt(v) for v in row) for row in cols]
    return "\n".join(lines) + "\n"


def write_paths_csv(path, ensemble):
    return atomic_write(path, paths_to_csv(ensemble.grid.points, ensemble.paths))


def read_paths_csv(path):
    """Return ``(times, paths)`` with paths shaped (n_paths, n_times)."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        header = f.readline().rstrip("\n").split(",")
        if not header or header[0] != "t":
            raise ValueError(f"{path}: first header column must be 't'")
        data = np.loadtxt(f, delimiter=",", ndmin=2)
    if data.shape[1] != len(header):
        raise ValueError(f"{path}: {len(header)} header columns but {data.shape[1]} data columns")
    return data[:, 0].copy(), data[:, 1:].T.copy()


def _default(o):
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _clean(o):
    # JSON has no inf/nan; encode them as strings
    if isinstance(o, dict):
        return {k: _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    if isinstance(o, np.ndarray):
        return _clean(o.tolist())
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        o = o.item()
    if isinstance(o, float) and not math.isfinite(o):
        return str(o)
    return o


def dumps(obj):
    return json.dumps(_clean(obj), indent=2, default=_default, allow_nan=False) + "\n"


def write_json(path, obj):
    return atomic_write(path, dumps(obj))

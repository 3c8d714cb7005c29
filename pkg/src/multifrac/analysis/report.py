"""Verification reports, power-law fits and Richardson extrapolation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateFitError

_MODES = ("abs", "rel", "le", "ge", "within")


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one check.

    ``passed`` is derived from the measured value named ``key`` compared
    with ``target`` under ``mode``:

    * ``abs``    : ``|v - target| <= tolerance``
    * ``rel``    : ``|v - target| <= tolerance * |target|``
    * ``le``     : ``v <= target + tolerance``
    * ``ge``     : ``v >= target - tolerance``
    * ``within`` : ``target[0] - tolerance <= v <= target[1] + tolerance``

    A skipped report (hypothesis not met, boundary regime) passes vacuously
    and says why in ``notes``.
    """

    check_name: str
    inputs: dict
    measured: tuple
    target: float | tuple
    tolerance: float
    key: str = ""
    mode: str = "le"
    notes: str = ""
    skipped: bool = False

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"unknown comparison mode {self.mode!r}")
        object.__setattr__(self, "measured", tuple((str(k), v) for k, v in self.measured))
        if not self.key and self.measured:
            object.__setattr__(self, "key", self.measured[0][0])

    def value(self, label):
        for k, v in self.measured:
            if k == label:
                return v
        raise KeyError(label)

    @property
    def passed(self):
        if self.skipped:
            return True
        v = float(self.value(self.key))
        if math.isnan(v):
            return False
        tgt, tol = self.target, self.tolerance
        if self.mode == "abs":
            return abs(v - tgt) <= tol
        if self.mode == "rel":
            return abs(v - tgt) <= tol * abs(tgt)
        if self.mode == "le":
            return v <= tgt + tol
        if self.mode == "ge":
            return v >= tgt - tol
        lo, hi = tgt
        return lo - tol <= v <= hi + tol

    def to_dict(self):
        tgt = list(self.target) if isinstance(self.target, tuple) else self.target
        return {
            "check_name": self.check_name,
            "inputs": self.inputs,
            "measured": [[k, _jsonable(v)] for k, v in self.measured],
            "target": tgt,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "notes": self.notes,
            "skipped": self.skipped,
        }

    def line(self):
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        return f"[{status}] {self.check_name}: {self.key}={self.value(self.key)!r} target={self.target!r}"


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


@dataclass(frozen=True)
class ExponentFit:
    abscissae: tuple
    values: tuple
    slope: float
    intercept: float
    r_squared: float
    residuals: tuple = field(default=(), repr=False)


def fit_asymptotic_exponent(abscissae, values, min_samples=8, min_decades=2.0):
    """Least-squares slope of ``log|value|`` against ``log(abscissa)``."""
    x = np.asarray(abscissae, dtype=float)
    y = np.asarray(values, dtype=float)
    if x.size != y.size:
        raise DegenerateFitError("abscissae and values differ in length")
    if x.size < min_samples:
        raise DegenerateFitError(f"need >= {min_samples} samples, got {x.size}")
    if np.any(x <= 0) or np.any(np.diff(x) <= 0):
        raise DegenerateFitError("abscissae must be positive and increasing")
    if np.any(y == 0) or np.any(~np.isfinite(y)):
        raise DegenerateFitError("values must be finite and nonzero")
    if math.log10(x[-1] / x[0]) < min_decades:
        raise DegenerateFitError(f"abscissae span fewer than {min_decades} decades")
    lx, ly = np.log(x), np.log(np.abs(y))
    xm, ym = lx.mean(), ly.mean()
    sxx = np.sum((lx - xm) ** 2)
    slope = float(np.sum((lx - xm) * (ly - ym)) / sxx)
    intercept = float(ym - slope * xm)
    resid = ly - (intercept + slope * lx)
    sst = float(np.sum((ly - ym) ** 2))
    sse = float(np.sum(resid**2))
    # constant data: spread is pure rounding, the fit is exact
    flat = sst <= 1e-24 * max(1.0, float(np.sum(ly**2)))
    r2 = 1.0 if flat else max(0.0, min(1.0, 1.0 - sse / sst))
    return ExponentFit(tuple(x), tuple(y), slope, intercept, r2, tuple(resid))


def richardson(steps, values, order):
    """Extrapolate ``values(step)`` to step -> 0 from the last two rungs.

    Assumes ``value(h) = limit + c h**order + ...``; the step ratio is read
    from the supplied steps, so any geometric ladder works.
    """
    h = np.asarray(steps, dtype=float)
    v = np.asarray(values, dtype=float)
    if h.size < 2:
        return float(v[-1])
    r = (h[-2] / h[-1]) ** order
    return float((r * v[-1] - v[-2]) / (r - 1.0))


def halving_ladder(start, stop):
    """Decreasing ratio-2 ladder ending exactly at ``stop``, beginning at or below ``start``."""
    m = max(1, int(math.floor(math.log2(start / stop) + 1e-9)))
    return float(stop) * 2.0 ** np.arange(m, -1, -1)

"""Time-varying Hurst functions t -> H(t) with a declared range [mu, nu].

Every built-in family is Lipschitz on bounded intervals, so its Hölder
exponent is 1.  Evaluation clamps to the declared range; callers that need
to know whether clamping happened use :meth:`HurstFunction.evaluate`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import DomainError

KINDS = ("constant", "linear", "sine", "logistic", "tabulated")

# parameter names accepted per kind, in canonical order
_PARAMS = {
    "constant": ("h",),
    "linear": ("a", "b", "lo", "hi"),
    "sine": ("mu", "nu", "period", "phase"),
    "logistic": ("mu", "nu", "center", "steepness"),
}


@dataclass(frozen=True)
class HurstFunction:
    """A Hurst function with declared range and Hölder exponent.

    Use the classmethod constructors (:meth:`constant`, :meth:`linear`,
    :meth:`sine`, :meth:`logistic`, :meth:`tabulated`) rather than building
    instances by hand.

    Parameters
    ----------
    kind : str
        One of ``constant``, ``linear``, ``sine``, ``logistic``, ``tabulated``.
    params : tuple of (name, value)
        Family parameters.
    range_lo, range_hi : float
        Declared range ``[mu, nu]`` inside ``(0, 1)``.
    holder_exponent : float
        Hölder exponent beta of the function.
    """

    kind: str
    params: tuple
    range_lo: float
    range_hi: float
    holder_exponent: float = 1.0
    table: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown Hurst function kind {self.kind!r}")
        if not (0.0 < self.range_lo <= self.range_hi < 1.0):
            raise DomainError(
                f"Hurst range must satisfy 0 < mu <= nu < 1, got "
                f"[{self.range_lo}, {self.range_hi}]"
            )
        if not self.holder_exponent > 0:
            raise DomainError("Hölder exponent must be positive")

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, h):
        return cls("constant", (("h", float(h)),), float(h), float(h))

    @classmethod
    def linear(cls, a, b, lo=0.01, hi=0.99):
        """H(t) = a + b t, clamped to ``[lo, hi]``."""
        return cls(
            "linear",
            (("a", float(a)), ("b", float(b)), ("lo", float(lo)), ("hi", float(hi))),
            float(lo),
            float(hi),
        )

    @classmethod
    def sine(cls, mu, nu, period=1.0, phase=0.0):
        """H(t) = (mu+nu)/2 + (nu-mu)/2 sin(2 pi t / period + phase)."""
        if period <= 0:
            raise DomainError("sine period must be positive")
        return cls(
            "sine",
            (("mu", float(mu)), ("nu", float(nu)), ("period", float(period)),
             ("phase", float(phase))),
            float(mu),
            float(nu),
        )

    @classmethod
    def logistic(cls, mu, nu, center=0.5, steepness=10.0):
        """H(t) = mu + (nu-mu) / (1 + exp(-steepness (t - center)))."""
        return cls(
            "logistic",
            (("mu", float(mu)), ("nu", float(nu)), ("center", float(center)),
             ("steepness", float(steepness))),
            float(mu),
            float(nu),
        )

    @classmethod
    def tabulated(cls, times, values, mu, nu, beta):
        """Piecewise-linear interpolation of tabulated values.

        The caller declares ``(mu, nu, beta)``; they are trusted, not checked
        against the table.  Outside the table the end values are held.
        """
        times = tuple(float(x) for x in times)
        values = tuple(float(x) for x in values)
        if len(times) != len(values) or len(times) < 2:
            raise DomainError("tabulated Hurst function needs >= 2 matching points")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise DomainError("tabulated times must be strictly increasing")
        return cls("tabulated", (), float(mu), float(nu), float(beta),
                   table=(times, values))

    @classmethod
    def from_string(cls, text):
        """Parse ``kind:key=value,...`` (e.g. ``sine:mu=0.3,nu=0.7,period=1``)."""
        kind, _, rest = text.strip().partition(":")
        kind = kind.strip().lower()
        if kind == "const":
            kind = "constant"
        if kind not in _PARAMS:
            raise DomainError(
                f"unknown Hurst family {kind!r}; expected one of {sorted(_PARAMS)}"
            )
        kwargs = {}
        for item in filter(None, (p.strip() for p in rest.split(","))):
            key, eq, value = item.partition("=")
            if not eq:
                raise DomainError(f"malformed Hurst parameter {item!r}")
            key = key.strip()
            if key not in _PARAMS[kind]:
                raise DomainError(f"{kind} does not take parameter {key!r}")
            kwargs[key] = float(value)
        try:
            return getattr(cls, kind)(**kwargs)
        except TypeError as exc:
            raise DomainError(f"bad parameters for {kind}: {exc}") from None

    def to_string(self):
        if self.kind == "tabulated":
            raise DomainError("tabulated Hurst functions have no string form")
        return self.kind + ":" + ",".join(f"{k}={v!r}" for k, v in self.params)

    # -- evaluation ---------------------------------------------------------

    @property
    def p(self):
        return dict(self.params)

    def _raw(self, t):
        p = self.p
        if self.kind == "constant":
            return np.full_like(t, p["h"])
        if self.kind == "linear":
            return p["a"] + p["b"] * t
        if self.kind == "sine":
            mid = 0.5 * (p["mu"] + p["nu"])
            amp = 0.5 * (p["nu"] - p["mu"])
            return mid + amp * np.sin(2 * np.pi * t / p["period"] + p["phase"])
        if self.kind == "logistic":
            z = -p["steepness"] * (t - p["center"])
            return p["mu"] + (p["nu"] - p["mu"]) * 0.5 * (1 - np.tanh(0.5 * z))
        times, values = self.table
        return np.interp(t, times, values)

    def evaluate(self, t):
        """Return ``(H(t), clamped)`` where ``clamped`` flags any clamping."""
        t = np.asarray(t, dtype=float)
        raw = self._raw(t)
        out = np.clip(raw, self.range_lo, self.range_hi)
        return out, bool(np.any(out != raw))

    def __call__(self, t):
        out, _ = self.evaluate(t)
        return out if out.ndim else float(out)

    def mp(self, t):
        """Evaluate at working mpmath precision (used by large-lag audits)."""
        p = self.p
        t = mpmath.mpf(t)
        if self.kind == "constant":
            v = mpmath.mpf(p["h"])
        elif self.kind == "linear":
            v = mpmath.mpf(p["a"]) + mpmath.mpf(p["b"]) * t
        elif self.kind == "sine":
            mu, nu = mpmath.mpf(p["mu"]), mpmath.mpf(p["nu"])
            v = (mu + nu) / 2 + (nu - mu) / 2 * mpmath.sin(
                2 * mpmath.pi * t / mpmath.mpf(p["period"]) + mpmath.mpf(p["phase"])
            )
        elif self.kind == "logistic":
            mu, nu = mpmath.mpf(p["mu"]), mpmath.mpf(p["nu"])
            v = mu + (nu - mu) / (
                1 + mpmath.exp(-mpmath.mpf(p["steepness"]) * (t - mpmath.mpf(p["center"])))
            )
        else:
            times, values = self.table
            if t <= times[0]:
                v = mpmath.mpf(values[0])
            elif t >= times[-1]:
                v = mpmath.mpf(values[-1])
            else:
                i = int(np.searchsorted(times, float(t))) - 1
                w = (t - times[i]) / (mpmath.mpf(times[i + 1]) - times[i])
                v = values[i] + w * (mpmath.mpf(values[i + 1]) - values[i])
        return min(max(v, mpmath.mpf(self.range_lo)), mpmath.mpf(self.range_hi))

    @property
    def lipschitz_constant(self):
        """Analytic Lipschitz constant of the unclamped built-in families."""
        p = self.p
        if self.kind == "constant":
            return 0.0
        if self.kind == "linear":
            return abs(p["b"])
        if self.kind == "sine":
            return (p["nu"] - p["mu"]) * math.pi / p["period"]
        if self.kind == "logistic":
            return (p["nu"] - p["mu"]) * abs(p["steepness"]) / 4
        times, values = self.table
        return float(np.max(np.abs(np.diff(values) / np.diff(times))))

    @property
    def is_constant(self):
        return self.kind == "constant" or self.range_lo == self.range_hi

    def limit_value(self):
        """Value approached as t -> infinity, or None when there is none."""
        p = self.p
        if self.kind == "constant":
            return p["h"]
        if self.kind == "linear":
            if p["b"] == 0:
                return min(max(p["a"], p["lo"]), p["hi"])
            return p["hi"] if p["b"] > 0 else p["lo"]
        if self.kind == "logistic":
            return p["nu"] if p["steepness"] > 0 else p["mu"]
        if self.kind == "tabulated":
            return self.table[1][-1]
        return None


def hurst_eval(hf, t):
    """``H(t)`` clamped to the declared range of ``hf``."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("Hurst functions are evaluated at t >= 0")
    return hf(t)

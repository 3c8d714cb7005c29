"""Long-range dependence: large-lag covariance/correlation exponents of the
process and of its unit-time increments, and the memory dichotomy.

Increment covariances at lag t are fourth-order differences of numbers of
size t^{2HK}, so every large-lag evaluation used for a fit runs at 50
significant digits through mpmath.  Float evaluation is kept for partial
sums, where it is accurate enough.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from ..errors import DomainError
from ..process import ProcessSpec
from .report import VerificationReport, fit_asymptotic_exponent

DPS = 50
SLOPE_TOL = 0.05
BOUNDARY_TOL = 0.02


def correlation(spec, t, s):
    """``cov(t, s) / sqrt(cov(t,t) cov(s,s))``."""
    vt, vs = np.asarray(spec.cov(t, t)), np.asarray(spec.cov(s, s))
    if np.any(vt == 0) or np.any(vs == 0):
        raise ZeroDivisionError("correlation undefined where a variance vanishes (t or s = 0)")
    out = np.asarray(spec.cov(t, s)) / np.sqrt(vt * vs)
    return out if out.ndim else float(out)


def increment_cov(spec, t, s):
    """Covariance of the unit increments ``Y(t) = X_{t+1} - X_t`` and ``Y(s)``."""
    c = spec.cov
    return (np.asarray(c(t + 1, s + 1)) - c(t + 1, s) - c(t, s + 1) + c(t, s))


def increment_correlation(spec, s, t):
    """Correlation of the unit increments starting at s and t."""
    num = increment_cov(spec, t, s)
    out = num / np.sqrt(increment_cov(spec, t, t) * increment_cov(spec, s, s))
    return out if np.ndim(out) else float(out)


def increment_cov_mp(spec, t, s):
    t, s = mpmath.mpf(t), mpmath.mpf(s)
    c = spec.cov_mp
    return c(t + 1, s + 1) - c(t + 1, s) - c(t, s + 1) + c(t, s)


def _with_precision(fn):
    def wrapped(*args, **kwargs):
        with mpmath.workdps(DPS):
            return fn(*args, **kwargs)
    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


def leading_exponent(a, K):
    """Large-t exponent of ``(t^a + s^a)^K - (t - s)^{aK}`` for fixed s.

    The expansion has terms ``t^{a(K-1)}`` and ``t^{aK-1}``; whichever is
    larger wins, i.e. the switch is at ``a = 1``.
    """
    return max(a * (K - 1), a * K - 1)


def default_t_grid(lo=1e6, hi=1e9, n=16):
    return np.logspace(math.log10(lo), math.log10(hi), n)


def lattice_t_grid(period, offset=0.0, lo=1e6, hi=1e9, n=16):
    """Log-spaced times snapped to ``offset + period * k``.

    For a periodic Hurst function this keeps H(t) and H(t+1) fixed across
    the grid, so increment exponents do not drift along the fit.
    """
    raw = default_t_grid(lo, hi, n)
    return np.unique(offset + period * np.round(raw / period))


def _hurst_label(hf):
    return hf.to_string() if hf.kind != "tabulated" else "tabulated"


def _regime(x):
    if abs(x - 1) < BOUNDARY_TOL:
        return "BOUNDARY"
    return ">1" if x > 1 else "<1"


@_with_precision
def lrd_process_audit(hf, K, s=1.0, t_grid=None):
    """Fit the large-t exponents of ``cov(t, s)`` and ``cor(t, s)``.

    Predictions use the leading term of the covariance expansion at
    ``a = H(t_max) + H(s)``: ``max(a(K-1), aK-1)`` for the covariance and
    that minus ``K H(t_max)`` for the correlation.  The textbook regime split
    by the sign of ``K a - 1`` and its exponents are reported alongside;
    inputs within 0.02 of either ``Ka = 1`` or ``a = 1`` are not judged.
    """
    t = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    if math.log10(t[-1] / t[0]) < 3 - 1e-9:
        raise DomainError("t grid must span at least 3 decades")
    spec = ProcessSpec.ext(hf, K)
    s = float(s)
    var_s = spec.cov_mp(s, s)
    covs, cors = [], []
    for ti in t:
        c = spec.cov_mp(ti, s)
        covs.append(float(c))
        cors.append(float(c / mpmath.sqrt(spec.cov_mp(ti, ti) * var_s)))
    fit_cov = fit_asymptotic_exponent(t, covs)
    fit_cor = fit_asymptotic_exponent(t, cors)

    h_t, h_s = float(hf(t[-1])), float(hf(s))
    a = h_t + h_s
    pred_cov = leading_exponent(a, K)
    pred_cor = pred_cov - K * h_t
    regime = _regime(K * a)
    split_cov = a * (K - 1) if K * a < 1 else K * a - 1
    split_cor = -h_t if K * a < 1 else K * h_s - 1
    spread = float(np.ptp([leading_exponent(float(hf(x)) + h_s, K) for x in t]))
    err = max(abs(fit_cov.slope - pred_cov), abs(fit_cor.slope - pred_cor))
    skipped = regime == "BOUNDARY" or abs(a - 1) < BOUNDARY_TOL
    notes = [f"regime K(H(t)+H(s)) {regime}"]
    if abs(a - 1) < BOUNDARY_TOL:
        notes.append("H(t)+H(s) near 1: both expansion terms tie, not judged")
    if abs(split_cov - pred_cov) > 1e-12 or abs(split_cor - pred_cor) > 1e-12:
        notes.append("regime-split exponents differ from the leading-term exponents")
    return VerificationReport(
        "lrd-process",
        {"hurst": _hurst_label(hf), "K": K, "s": s,
         "t_min": float(t[0]), "t_max": float(t[-1]), "n_t": int(t.size)},
        (("max_slope_error", err), ("cov_slope", fit_cov.slope), ("cov_predicted", pred_cov),
         ("cor_slope", fit_cor.slope), ("cor_predicted", pred_cor),
         ("cov_regime_split", split_cov), ("cor_regime_split", split_cor),
         ("K_sum", K * a), ("prediction_spread", spread),
         ("cov_r2", fit_cov.r_squared), ("cor_r2", fit_cor.r_squared)),
        target=0.0, tolerance=SLOPE_TOL, mode="le",
        notes="; ".join(notes), skipped=skipped,
    )


def _four_sums(hf, t, s):
    ht, ht1, hs, hs1 = (float(hf(x)) for x in (t, t + 1, s, s + 1))
    return (ht + hs, ht1 + hs, ht + hs1, ht1 + hs1), (ht, ht1, hs, hs1)


@_with_precision
def lrd_increment_audit(hf, K, s=1.0, t_grid=None, gap_tol=BOUNDARY_TOL):
    """Fit the large-t exponents of the unit-increment covariance and correlation.

    The four sums ``H(t)+H(s), H(t+1)+H(s), H(t)+H(s+1), H(t+1)+H(s+1)``
    must be pairwise separated by at least ``gap_tol`` at ``t_max``;
    otherwise the increments cancel to a different order and the report is
    skipped as degenerate.  With separated sums the four covariances carry
    distinct exponents, so the prediction is the largest leading exponent
    among them; for the correlation subtract ``K max(H(t), H(t+1))``.
    """
    if t_grid is None:
        raise DomainError("increment audit needs an explicit t grid (see lattice_t_grid)")
    t = np.asarray(t_grid, dtype=float)
    if math.log10(t[-1] / t[0]) < 3 - 1e-9:
        raise DomainError("t grid must span at least 3 decades")
    s = float(s)
    spec = ProcessSpec.ext(hf, K)
    sums, (ht, ht1, hs, hs1) = _four_sums(hf, t[-1], s)
    L = max(sums)
    min_gap = min(abs(x - y) for x, y in itertools.combinations(sums, 2))
    inputs = {"hurst": _hurst_label(hf), "K": K, "s": s,
              "t_min": float(t[0]), "t_max": float(t[-1]), "n_t": int(t.size)}
    base = (("min_sum_gap", min_gap), ("L", L), ("KL", K * L))
    if hf.is_constant or min_gap < gap_tol:
        why = ("constant Hurst function: all four sums coincide and the increments "
               "cancel to higher order" if hf.is_constant else
               f"four sums not separated (min gap {min_gap:.3g} < {gap_tol})")
        return VerificationReport("lrd-increment", inputs, (("max_slope_error", float("nan")),) + base,
                                  target=0.0, tolerance=SLOPE_TOL, mode="le",
                                  notes=f"degenerate, skipped: {why}", skipped=True)

    var_s = increment_cov_mp(spec, s, s)
    covs, cors = [], []
    for ti in t:
        c = increment_cov_mp(spec, ti, s)
        covs.append(float(c))
        cors.append(float(c / mpmath.sqrt(increment_cov_mp(spec, ti, ti) * var_s)))
    fit_cov = fit_asymptotic_exponent(t, covs)
    fit_cor = fit_asymptotic_exponent(t, cors)

    pred_cov = max(leading_exponent(x, K) for x in sums)
    pred_cor = pred_cov - K * max(ht, ht1)
    regime = _regime(K * L)
    split_cov = L * (K - 1) if K * L < 1 else K * L - 1
    split_cor = -K * max(ht, ht1) if K * L < 1 else K * max(hs, hs1) - 1
    per_t = [max(leading_exponent(x, K) for x in _four_sums(hf, ti, s)[0]) for ti in t]
    spread = float(np.ptp(per_t))
    err = max(abs(fit_cov.slope - pred_cov), abs(fit_cor.slope - pred_cor))
    notes = [f"regime KL {regime}"]
    if abs(split_cov - pred_cov) > 1e-12 or abs(split_cor - pred_cor) > 1e-12:
        notes.append("regime-split exponents differ from the leading-term exponents")
    if spread > SLOPE_TOL / 2:
        notes.append(f"predicted exponent drifts by {spread:.3g} across the grid")
    return VerificationReport(
        "lrd-increment", inputs,
        (("max_slope_error", err), ("cov_slope", fit_cov.slope), ("cov_predicted", pred_cov),
         ("cor_slope", fit_cor.slope), ("cor_predicted", pred_cor),
         ("cov_regime_split", split_cov), ("cor_regime_split", split_cor)) + base
        + (("prediction_spread", spread), ("cov_r2", fit_cov.r_squared),
           ("cor_r2", fit_cor.r_squared)),
        target=0.0, tolerance=SLOPE_TOL, mode="le",
        notes="; ".join(notes), skipped=regime == "BOUNDARY",
    )


@dataclass(frozen=True)
class MemoryClassification:
    label: str
    tail_exponent: float
    partial_sums: np.ndarray
    expected: str | None
    report: VerificationReport


def memory_classification(spec, s=1.0, delta=1.0, n_terms=10_000):
    """Classify memory from ``|cor_Y(s, s + kδ)|``, k = 0..n_terms.

    The tail exponent τ is fitted over the last two decades of lags (at 50
    digits).  LONG when τ > -1 (terms not summable), SHORT when τ < -1,
    BOUNDARY when ``|τ + 1| < 0.02``.  For processes with constant
    regularity the label is checked against the 2HK > 1 dichotomy.
    """
    if n_terms < 1000:
        raise DomainError("n_terms must be at least 1000")
    s, delta = float(s), float(delta)
    k = np.arange(n_terms + 1, dtype=float)
    terms = np.abs(increment_correlation(spec, s, s + k * delta))
    partial = np.cumsum(terms)

    lags = np.unique(np.round(np.logspace(math.log10(n_terms / 100), math.log10(n_terms), 24)))
    with mpmath.workdps(DPS):
        var_s = increment_cov_mp(spec, s, s)
        tail = []
        for kk in lags:
            tt = s + kk * delta
            c = increment_cov_mp(spec, tt, s)
            tail.append(float(abs(c / mpmath.sqrt(increment_cov_mp(spec, tt, tt) * var_s))))
    tail = np.array(tail)
    if np.all(tail <= 1e-13):
        tau, label, r2 = -math.inf, "SHORT", 1.0
        note = "tail terms vanish"
    else:
        fit = fit_asymptotic_exponent(lags, tail)
        tau, r2 = fit.slope, fit.r_squared
        label = "BOUNDARY" if abs(tau + 1) < BOUNDARY_TOL else ("LONG" if tau > -1 else "SHORT")
        note = ""

    fitted_label = label
    expected, skipped = None, False
    const = spec.as_bfbm
    if const is not None:
        H, K = const
        x = 2 * H * K
        if abs(x - 1) < BOUNDARY_TOL and tau == -math.inf:
            # exactly uncorrelated increments (Brownian): summable, no judgement needed
            expected = "SHORT"
        elif abs(x - 1) < BOUNDARY_TOL:
            skipped = True
            label = "BOUNDARY"
            note += " 2HK at the boundary, not judged"
        else:
            expected = "LONG" if x > 1 else "SHORT"
    else:
        skipped = True
        note += " no constant-regularity dichotomy to check"
    agree = 1.0 if expected is None or label == expected else 0.0
    report = VerificationReport(
        "memory",
        {"process": spec.describe(), "s": s, "delta": delta, "n_terms": int(n_terms)},
        (("agrees", agree), ("tail_exponent", tau), ("tail_r2", r2),
         ("label", label), ("fitted_label", fitted_label), ("expected", expected or "n/a"),
         ("partial_sum", float(partial[-1]))),
        target=1.0, tolerance=0.0, mode="ge", notes=note.strip(),
        skipped=skipped,
    )
    return MemoryClassification(label, tau, partial, expected, report)

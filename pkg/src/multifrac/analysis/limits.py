"""Small-scale limits: increment variance ratio and local asymptotic
self-similarity of the extended process."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import DegenerateFitError
from .bounds import bfbm_increment_variance
from .report import (ExponentFit, VerificationReport, fit_asymptotic_exponent,
                     halving_ladder, richardson)


@dataclass(frozen=True)
class LimitResult:
    steps: tuple
    values: tuple
    errors: tuple
    limit: float
    target: float
    fit: ExponentFit | None
    report: VerificationReport

    @property
    def monotone_tail(self):
        """Errors shrink over the last three rungs."""
        e = self.errors[-3:]
        return all(b <= a for a, b in zip(e, e[1:]))


@dataclass(frozen=True)
class LassResult:
    steps: tuple
    matrices: np.ndarray
    errors: tuple
    limit: np.ndarray
    target: np.ndarray
    report: VerificationReport

    @property
    def monotone_tail(self):
        e = self.errors[-3:]
        return all(b <= a for a, b in zip(e, e[1:]))


def small_increment_ratio(H, K, t, eps_list=None, tol=1e-4):
    """``σ²_ε(t) / ε^{2HK}`` for the bifractional process and its ε -> 0 limit.

    The default ladder halves ε from ``1e-2 t`` to ``1e-6 t``.  The ratio
    behaves like ``2^{1-K} + c ε^{2-2HK} + O(ε^{3-2HK})``, so Richardson
    extrapolation uses order ``2 - 2HK``.
    """
    eps = halving_ladder(1e-2 * t, 1e-6 * t) if eps_list is None else np.asarray(eps_list, float)
    # divide by the increment actually represented, not the nominal eps
    gap = (t + eps) - t
    var = bfbm_increment_variance(t + eps, t, H, K)
    ratios = var / gap ** (2 * H * K)
    target = 2.0 ** (1 - K)
    limit = richardson(eps, ratios, 2 - 2 * H * K) if K != 1.0 else float(ratios[-1])
    order = np.argsort(eps)
    try:
        fit = fit_asymptotic_exponent(eps[order], var[order])
    except DegenerateFitError:
        fit = None
    errors = tuple(float(x) for x in np.abs(ratios - target) / target)
    rel = abs(limit - target) / target
    report = VerificationReport(
        "small-increment",
        {"H": H, "K": K, "t": t, "eps_min": float(eps.min())},
        (("relative_error", rel), ("limit", limit), ("last_ratio", float(ratios[-1])),
         ("fitted_exponent", fit.slope if fit else float("nan"))),
        target=0.0, tolerance=tol, mode="le",
        notes=f"target 2^(1-K) = {target!r}",
    )
    return LimitResult(tuple(eps), tuple(ratios), errors, limit, target, fit, report)


def rescaled_increment_cov(hf, K, t, u, rho):
    """``E[(B_{t+ρu}-B_t)(B_{t+ρv}-B_t)] / ρ^{2H(t)K}`` for u, v in ``u``."""
    u = np.asarray(u, dtype=float)
    x = t + rho * u
    c = lambda a, b: np.asarray(kernels.cov_ext(a, b, hf, K))
    num = (c(x[:, None], x[None, :]) - c(x[:, None], t) - c(t, x[None, :]) + c(t, t))
    return num / rho ** (2 * hf(t) * K)


def lass_covariance_limit(hf, K, t, u_grid=(0.5, 1.0, 2.0), rho_list=None, tol=1e-3):
    """Rescaled increment covariance as ρ -> 0 versus ``2^{1-K} cov_fbm(u, v, H(t)K)``.

    The default ρ ladder halves down to 1e-5.  Variation of H(.) near t
    contributes an ``O(ρ log ρ)`` error, so entries are extrapolated with
    first-order Richardson on the last two rungs.
    """
    rho = halving_ladder(1e-2, 1e-5) if rho_list is None else np.asarray(rho_list, float)
    u = np.asarray(u_grid, dtype=float)
    h = hf(t)
    target = 2.0 ** (1 - K) * kernels.cov_fbm(u[:, None], u[None, :], h * K)
    mats = np.array([rescaled_increment_cov(hf, K, t, u, r) for r in rho])
    limit = mats[-1]
    if rho.size > 1:
        ratio = rho[-2] / rho[-1]
        limit = (ratio * mats[-1] - mats[-2]) / (ratio - 1)
    rel_err = lambda m: float(np.max(np.abs(m - target) / np.abs(target)))
    errors = tuple(rel_err(m) for m in mats)
    err = rel_err(limit)
    report = VerificationReport(
        "lass",
        {"hurst": hf.to_string() if hf.kind != "tabulated" else "tabulated",
         "K": K, "t": t, "u_grid": [float(x) for x in u], "rho_min": float(rho.min())},
        (("max_relative_error", err), ("raw_error_at_rho_min", errors[-1]),
         ("H_t", float(h)), ("variance_limit_factor", 2.0 ** (1 - K))),
        target=0.0, tolerance=tol, mode="le",
        notes="limit covariance 2^(1-K) cov_fbm(u, v, H(t)K); diagonal gives sigma_t^2 = 2^(1-K) at u = 1",
    )
    return LassResult(tuple(rho), mats, errors, limit, target, report)

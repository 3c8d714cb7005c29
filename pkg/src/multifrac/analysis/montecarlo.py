"""End-to-end Monte Carlo smoke tests of the sampler against the kernels."""

from __future__ import annotations

import numpy as np
from scipy import linalg, stats

from ..simulate import (TimeGrid, assemble_covariance, kernel_standard_errors, simulate)
from .bounds import gaussian_abs_moment
from .report import VerificationReport


def covariance_mc_audit(spec, grid, n_paths=10_000, seed=0, workers=1, n_se=4.0):
    """Sample covariance against the kernel, entrywise in standard errors.

    Standard errors are those of a Gaussian sample covariance around the
    true kernel.  Pinned (t = 0) entries are exact zeros and are left out.
    Entries are correlated, so ``mean_z2`` is only a rough diagnostic; the
    global aggregate is the likelihood-ratio statistic of
    :func:`covariance_lrt`.
    """
    if not isinstance(grid, TimeGrid):
        grid = TimeGrid(grid)
    kernel = assemble_covariance(spec, grid).entries
    e = simulate(spec, grid, n_paths, seed, workers)
    paths = e.paths
    c = paths - paths.mean(axis=0)
    emp = c.T @ c / (n_paths - 1)
    se = kernel_standard_errors(kernel, n_paths)
    iu = np.triu_indices_from(kernel)
    keep = se[iu] > 0
    z = np.abs(emp[iu] - kernel[iu])[keep] / se[iu][keep]
    stat, pvalue = covariance_lrt(emp, kernel, n_paths)
    return VerificationReport(
        "mc-covariance",
        {"spec": spec.to_dict(), "n_times": len(grid), "n_paths": n_paths, "seed": seed},
        (("max_z", float(z.max())), ("mean_z2", float(np.mean(z**2))), ("entries", int(z.size)),
         ("lrt_statistic", stat), ("lrt_pvalue", pvalue), ("jitter", e.jitter)),
        target=n_se, tolerance=0.0, mode="le",
    ), e


def covariance_lrt(sample, kernel, n_paths):
    """Likelihood-ratio test of ``Sigma = kernel`` from a centred sample covariance.

    ``(n-1) [tr A - log det A - p]`` with ``A = kernel^{-1} sample`` is
    asymptotically chi-square with ``p(p+1)/2`` degrees of freedom.
    Zero rows (pinned times) are dropped.  Returns ``(statistic, p_value)``.
    """
    active = np.diag(kernel) > 0
    k = kernel[np.ix_(active, active)]
    s = sample[np.ix_(active, active)]
    p = k.shape[0]
    c = linalg.cho_factor(k, lower=True)
    a = linalg.cho_solve(c, s)
    sign, logdet = np.linalg.slogdet(a)
    if sign <= 0:
        return float("inf"), 0.0
    stat = float((n_paths - 1) * (np.trace(a) - logdet - p))
    return stat, float(stats.chi2.sf(stat, p * (p + 1) // 2))


def abs_moment_audit(samples, variance, alphas=(1.0, 2.0, 4.0), n_se=4.0, label=""):
    """Sampled ``E|Y|^alpha`` against ``c(alpha) var^{alpha/2}`` within CLT bands.

    The band for each alpha uses the exact Gaussian variance
    ``E|Y|^{2 alpha} - (E|Y|^alpha)^2``.
    """
    y = np.asarray(samples, dtype=float).ravel()
    n = y.size
    measured = []
    worst = 0.0
    for a in alphas:
        m = float(np.mean(np.abs(y) ** a))
        exact = gaussian_abs_moment(a, variance)
        sd = np.sqrt(gaussian_abs_moment(2 * a, variance) - exact**2)
        z = abs(m - exact) / (sd / np.sqrt(n))
        worst = max(worst, float(z))
        measured += [(f"E|Y|^{a:g}", m), (f"c({a:g}) var^{a / 2:g}", exact), (f"z({a:g})", z)]
    return VerificationReport(
        "abs-moments",
        {"variance": variance, "n": n, "alphas": list(alphas), "label": label},
        [("max_z", worst)] + measured,
        target=n_se, tolerance=0.0, mode="le",
    )


def lass_mc_audit(hf, K, t=1.0, rho=1e-3, u_grid=(0.5, 1.0, 2.0), n_paths=10_000, seed=0,
                  workers=1, n_se=4.0):
    """Sampled variance of rescaled increments against ``2^{1-K} u^{2H(t)K}``,
    plus the absolute first moment of the u = 1 increment."""
    u = np.asarray(u_grid, dtype=float)
    from ..process import ProcessSpec
    spec = ProcessSpec.ext(hf, K)
    grid = TimeGrid(np.concatenate([[t], t + rho * u]))
    e = simulate(spec, grid, n_paths, seed, workers)
    h = hf(t)
    inc = (e.paths[:, 1:] - e.paths[:, [0]]) / rho ** (h * K)
    target = 2.0 ** (1 - K) * u ** (2 * h * K)
    var = inc.var(axis=0, ddof=1)
    z = np.abs(var - target) / (target * np.sqrt(2.0 / (n_paths - 1)))
    j = int(np.argmin(np.abs(u - 1.0)))
    mom = abs_moment_audit(inc[:, j], float(target[j]), alphas=(1.0,), n_se=n_se, label="rescaled increment u=1")
    worst = max(float(z.max()), mom.value("max_z"))
    return VerificationReport(
        "lass-mc",
        {"hurst": hf.to_string(), "K": K, "t": t, "rho": rho, "u_grid": list(map(float, u)),
         "n_paths": n_paths, "seed": seed},
        (("max_z", worst), ("variance_z", [float(x) for x in z]),
         ("sample_variance", [float(x) for x in var]), ("target_variance", [float(x) for x in target]),
         ("abs_moment_z", mom.value("max_z"))),
        target=n_se, tolerance=0.0, mode="le",
    )

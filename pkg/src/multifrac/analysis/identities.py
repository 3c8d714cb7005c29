"""Deterministic audits of kernel identities and positive semi-definiteness."""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..hurst import HurstFunction
from ..process import ProcessSpec
from ..simulate import TimeGrid, assemble_covariance, check_psd
from .report import VerificationReport


def _label(hf):
    return hf.to_string() if hf.kind != "tabulated" else "tabulated"


def psd_audit(spec, grid, tol=1e-10):
    """Smallest eigenvalue of the kernel matrix against ``-tol * max(1, trace/n)``."""
    if not isinstance(grid, TimeGrid):
        grid = TimeGrid(grid)
    rep = check_psd(assemble_covariance(spec, grid), tol)
    return VerificationReport(
        "psd",
        {"spec": spec.to_dict(), "n_times": len(grid),
         "t_min": float(grid.points[0]), "t_max": float(grid.points[-1])},
        (("min_eigenvalue", rep.min_eigenvalue), ("threshold", rep.threshold),
         ("trace", rep.trace), ("size", rep.size)),
        target=rep.threshold, tolerance=0.0, mode="ge",
    )


def random_hurst_function(rng):
    """Draw one built-in Hurst function with range inside [0.05, 0.95]."""
    mu, nu = np.sort(rng.uniform(0.05, 0.95, size=2))
    kind = rng.choice(["constant", "linear", "sine", "logistic"])
    if kind == "constant":
        return HurstFunction.constant(float(mu))
    if kind == "linear":
        # affine on [0, 10] from mu to nu, with the clamp range set to match
        return HurstFunction.linear(float(mu), float((nu - mu) / 10), float(mu), float(nu))
    if kind == "sine":
        return HurstFunction.sine(float(mu), float(nu), float(rng.uniform(0.5, 10)),
                                  float(rng.uniform(0, 2 * np.pi)))
    return HurstFunction.logistic(float(mu), float(nu), float(rng.uniform(0, 10)),
                                  float(rng.uniform(0.5, 5)))


def random_psd_configs(n_configs, seed=0, Ks=(0.3, 0.6, 1.0), max_points=128, t_max=10.0):
    """Reproducible random (spec, grid) pairs: built-in Hurst functions,
    K from ``Ks``, sorted uniform grids of at most ``max_points`` on [0, t_max]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(int(n_configs)):
        hf = random_hurst_function(rng)
        K = float(rng.choice(Ks))
        n = int(rng.integers(2, max_points + 1))
        pts = np.unique(rng.uniform(0, t_max, size=n))
        if rng.random() < 0.25:
            pts = np.unique(np.concatenate([[0.0], pts]))[:max_points]
        out.append((ProcessSpec.ext(hf, K), TimeGrid(pts)))
    return out


def psd_sweep(n_configs=50, seed=0, tol=1e-10, **kw):
    """One :func:`psd_audit` per random configuration."""
    return [psd_audit(spec, grid, tol) for spec, grid in random_psd_configs(n_configs, seed, **kw)]


def reduction_audit(n_points=1000, seed=0, tol=1e-13):
    """Worst relative gap across the three degenerate reductions of ``cov_ext``."""
    rng = np.random.default_rng(seed)
    t, s = rng.uniform(0.01, 10, size=(2, n_points))
    H = rng.uniform(0.05, 0.95, size=n_points)
    K = rng.uniform(0.05, 0.95, size=n_points)
    hf = HurstFunction.sine(0.2, 0.8, 3.0, 0.4)

    def rel(a, b):
        a, b = np.asarray(a), np.asarray(b)
        return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))

    ext_bfbm = max(rel(kernels.cov_ext(t[i], s[i], HurstFunction.constant(H[i]), K[i]),
                       kernels.cov_bfbm(t[i], s[i], H[i], K[i])) for i in range(n_points))
    ext_mbm = rel(kernels.cov_ext(t, s, hf, 1.0), kernels.cov_mbm(t, s, hf))
    bfbm_fbm = max(rel(kernels.cov_bfbm(t[i], s[i], H[i], 1.0), kernels.cov_fbm(t[i], s[i], H[i]))
                   for i in range(n_points))
    worst = max(ext_bfbm, ext_mbm, bfbm_fbm)
    return VerificationReport(
        "reduction",
        {"n_points": n_points, "seed": seed},
        (("max_relative_gap", worst), ("ext_vs_bfbm", ext_bfbm),
         ("ext_vs_mbm", ext_mbm), ("bfbm_vs_fbm", bfbm_fbm)),
        target=0.0, tolerance=tol, mode="le",
    )


def decomposition_audit(hf=None, K=None, n_points=1000, seed=0, tol=1e-12):
    """Max relative residual of the decomposition covariance identity.

    With ``hf`` and ``K`` fixed only (t, s) are drawn; otherwise each
    sample also draws a built-in Hurst function and K in (0.05, 0.95).
    """
    rng = np.random.default_rng(seed)
    worst, at = 0.0, None
    for _ in range(int(n_points)):
        t, s = rng.uniform(0, 10, size=2)
        h = hf if hf is not None else random_hurst_function(rng)
        k = K if K is not None else float(rng.uniform(0.05, 0.95))
        r = float(kernels.decomposition_residual(t, s, h, k))
        if r > worst or at is None:
            worst, at = max(worst, r), (float(t), float(s), _label(h), k)
    inputs = {"n_points": n_points, "seed": seed}
    if hf is not None:
        inputs["hurst"] = _label(hf)
    if K is not None:
        inputs["K"] = K
    return VerificationReport(
        "decomposition", inputs,
        (("max_relative_residual", worst), ("worst_at", list(at))),
        target=0.0, tolerance=tol, mode="le",
        notes="coefficient D(H(t),H(s))^K / D(H(t)K,H(s)K) on the multifractional side",
    )


def tk_identity_audit(t_list=None, K_list=None, tol=1e-8):
    """Residual of the integral representation of ``t^K`` on a log grid."""
    t_list = np.concatenate([[0.0], np.logspace(-3, 2, 11)]) if t_list is None else np.asarray(t_list, float)
    K_list = np.linspace(0.05, 0.95, 7) if K_list is None else np.asarray(K_list, float)
    res = np.array([[kernels.tk_identity_residual(t, k) for k in K_list] for t in t_list])
    i, j = np.unravel_index(int(np.argmax(res)), res.shape)
    return VerificationReport(
        "tk-identity",
        {"t": [float(x) for x in t_list], "K": [float(x) for x in K_list]},
        (("max_residual", float(res[i, j])), ("worst_t", float(t_list[i])), ("worst_K", float(K_list[j]))),
        target=0.0, tolerance=tol, mode="le",
    )

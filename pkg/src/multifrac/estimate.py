"""Local regularity estimation from sampled paths.

Quadratic-variation estimator: inside a window centred at t, average the
squared increments at a few dyadic lags, then regress the log mean square
on the log lag.  For the extended process the increment variance behaves
like ``lag^{2 H(t) K}``, so half the slope estimates the product
``H(t) K``.  H and K are not separately identifiable from one path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientPathsError, WindowError

DEFAULT_WINDOW = 257
DEFAULT_SCALES = (1, 2, 4, 8)
CLAMP = (0.01, 0.99)


@dataclass(frozen=True)
class LocalExponentEstimate:
    """Estimate of the local exponent ``H(t) K``.

    Attributes
    ----------
    t : float
        Requested time (the window is centred on the nearest grid point).
    estimate : float
        Half the fitted log-log slope, clamped to ``(0.01, 0.99)``.
    window : int
        Number of samples in the window.
    scales : tuple of int
        Lags in grid steps.
    stderr : float
        Standard error; across-path spread for ensembles, regression
        standard error for a single path.
    clamped : bool
        True when the raw slope fell outside the clamp range.
    raw : float
        Unclamped slope / 2.
    """

    t: float
    estimate: float
    window: int
    scales: tuple
    stderr: float
    clamped: bool = False
    raw: float = float("nan")

    def to_dict(self):
        return {"t": self.t, "estimate": self.estimate, "window": self.window,
                "scales": list(self.scales), "stderr": self.stderr,
                "clamped": self.clamped, "raw": self.raw}


def _uniform_step(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise DomainError("need a 1-d grid with at least two times")
    d = np.diff(times)
    if np.any(d <= 0) or not np.allclose(d, d[0], rtol=1e-9, atol=0.0):
        raise DomainError("local_hurst_estimate requires a uniform grid")
    return float(d[0])


def _window_bounds(times, t, window, max_scale):
    n = len(times)
    if window < max_scale + 2:
        raise WindowError(f"window of {window} samples is too short for lag {max_scale}")
    i0 = int(np.argmin(np.abs(times - t)))
    lo = i0 - (window - 1) // 2
    hi = lo + window
    if lo < 0 or hi > n:
        raise WindowError(
            f"window of {window} samples centred at t={t!r} needs indices "
            f"[{lo}, {hi}) but the grid has {n} points"
        )
    return lo, hi


def _mean_squares(x, scales):
    # x has shape (n_paths, window); returns (n_paths, n_scales)
    return np.stack([np.mean((x[:, s:] - x[:, :-s]) ** 2, axis=1) for s in scales], axis=1)


def _slope(log_lag, log_ms):
    """Least-squares slopes of each row of ``log_ms`` and their standard errors."""
    xm = log_lag.mean()
    dx = log_lag - xm
    sxx = float(np.sum(dx**2))
    ym = log_ms.mean(axis=-1, keepdims=True)
    slope = np.sum(dx * (log_ms - ym), axis=-1) / sxx
    resid = log_ms - ym - slope[..., None] * dx
    dof = max(log_lag.size - 2, 1)
    se = np.sqrt(np.sum(resid**2, axis=-1) / dof / sxx)
    return slope, se


def _clamp(h):
    lo, hi = CLAMP
    return float(min(max(h, lo), hi)), bool(h < lo or h > hi)


def local_hurst_estimate(path, times, t, window=DEFAULT_WINDOW, scales=DEFAULT_SCALES):
    """Estimate ``H(t) K`` near ``t`` from one path or a stack of paths.

    Parameters
    ----------
    path : array_like
        Shape ``(n,)`` for a single path or ``(n_paths, n)`` for an
        ensemble sampled on the same grid.
    times : array_like
        Uniform sample times, shape ``(n,)``.
    t : float
        Centre of the window.
    window : int
        Samples in the window (default 257).
    scales : sequence of int
        Positive lags in grid steps, at least two distinct values.

    Returns
    -------
    LocalExponentEstimate

    Notes
    -----
    Squared increments are averaged across paths at each lag before the
    regression, which reduces variance without changing the bias.
    """
    x = np.atleast_2d(np.asarray(path, dtype=float))
    times = np.asarray(times, dtype=float)
    if x.shape[1] != times.size:
        raise DomainError(f"path length {x.shape[1]} does not match {times.size} grid times")
    if x.shape[0] == 0:
        raise InsufficientPathsError("no paths to estimate from")
    scales = tuple(sorted({int(s) for s in scales}))
    if len(scales) < 2:
        raise WindowError("need at least two distinct scales")
    if scales[0] < 1:
        raise WindowError("scales must be positive lags")
    dt = _uniform_step(times)
    lo, hi = _window_bounds(times, t, int(window), scales[-1])
    ms = _mean_squares(x[:, lo:hi], scales)
    log_lag = np.log(np.asarray(scales, dtype=float) * dt)
    with np.errstate(divide="ignore"):
        pooled = np.log(ms.mean(axis=0))
    if not np.all(np.isfinite(pooled)):
        raise WindowError("zero quadratic variation inside the window")
    slope, se = _slope(log_lag, pooled)
    raw = float(slope) / 2
    if x.shape[0] > 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            per_path, _ = _slope(log_lag, np.log(ms))
        per_path = per_path[np.isfinite(per_path)] / 2
        stderr = float(np.std(per_path, ddof=1) / np.sqrt(per_path.size)) if per_path.size > 1 else float("nan")
    else:
        stderr = float(se) / 2
    est, clamped = _clamp(raw)
    return LocalExponentEstimate(float(t), est, hi - lo, scales, stderr, clamped, raw)


def hurst_profile(ensemble, t_list, window=DEFAULT_WINDOW, scales=DEFAULT_SCALES):
    """Ensemble-averaged local exponent at each time in ``t_list``.

    For the extended process the profile tracks ``H(t) K``.
    """
    paths = ensemble.paths
    if paths.shape[0] == 0:
        raise InsufficientPathsError("ensemble is empty")
    times = ensemble.grid.points
    return [local_hurst_estimate(paths, times, float(t), window, scales) for t in t_list]

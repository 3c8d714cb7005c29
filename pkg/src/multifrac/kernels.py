"""Closed-form covariance kernels and the identities they satisfy.

All float kernels broadcast over numpy arrays of times.  The ``*_mp``
variants take scalars and evaluate at the ambient ``mpmath`` precision;
large-lag audits need them because increment covariances are fourth-order
differences of O(t^{2HK}) numbers.
"""

import math

import mpmath
import numpy as np
from scipy.special import gammaln

from . import quadrature
from .errors import DomainError

__all__ = [
    "eval_D",
    "cov_fbm",
    "cov_bfbm",
    "cov_mbm",
    "cov_ext",
    "cov_xk",
    "decomposition_constants",
    "decomposition_residual",
    "tk_identity_quadrature",
    "tk_identity_residual",
]


def _times(*ts):
    out = [np.asarray(t, dtype=float) for t in ts]
    for t in out:
        if np.any(t < 0) or np.any(np.isnan(t)):
            raise DomainError("times must be non-negative")
    return out


def _check_open_unit(name, x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or np.any(x >= 1) or np.any(np.isnan(x)):
        raise DomainError(f"{name} must lie in (0, 1)")
    return x


def _check_K(K, allow_one=True):
    K = float(K)
    if not (0.0 < K < 1.0 or (allow_one and K == 1.0)):
        raise DomainError(f"K must lie in (0, 1{']' if allow_one else ')'}, got {K}")
    return K


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def _bracket(t, s, a, K):
    """``(t^a + s^a)^K - |t-s|^{aK}`` without cancellation.

    With ``hi = max(t, s)`` and ``r = min/max`` the bracket equals
    ``hi^{aK} [expm1(K log1p(r^a)) - expm1(aK log1p(-r))]``; the naive form
    loses digits when one time is much smaller than the other.
    """
    hi, lo = np.maximum(t, s), np.minimum(t, s)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(hi > 0, lo / np.where(hi > 0, hi, 1.0), 0.0)
        inner = np.expm1(K * np.log1p(r**a)) - np.expm1(a * K * np.log1p(-r))
    return hi ** (a * K) * inner


def _origin(val, t, s):
    # every kernel vanishes when either time is 0; force it against rounding
    return np.where((t == 0) | (s == 0), 0.0, val)


def eval_D(x, y):
    """Normalising factor D(x, y) of the standard multifractional kernel.

    Evaluated in log-space with arguments sorted first, so ``eval_D(x, y)``
    and ``eval_D(y, x)`` agree bit for bit.  ``D(x, x) = 1/2`` is returned
    exactly.
    """
    x = _check_open_unit("x", x)
    y = _check_open_unit("y", y)
    lo, hi = np.minimum(x, y), np.maximum(x, y)
    log_d = (
        0.5 * (gammaln(2 * lo + 1) + gammaln(2 * hi + 1)
               + np.log(np.sin(np.pi * lo)) + np.log(np.sin(np.pi * hi)))
        - math.log(2.0)
        - gammaln(lo + hi + 1)
        - np.log(np.sin(0.5 * np.pi * (lo + hi)))
    )
    return _scalar(np.where(lo == hi, 0.5, np.exp(log_d)))


def cov_fbm(t, s, H):
    """Fractional Brownian motion covariance ½(t^2H + s^2H - |t-s|^2H)."""
    t, s = _times(t, s)
    _check_open_unit("H", H)
    p = 2.0 * H
    return _scalar(_origin(0.5 * _bracket(t, s, p, 1.0), t, s))


def cov_bfbm(t, s, H, K):
    """Bifractional Brownian motion covariance 2^-K [(t^2H + s^2H)^K - |t-s|^2HK]."""
    t, s = _times(t, s)
    _check_open_unit("H", H)
    K = _check_K(K)
    if K == 1.0:
        return cov_fbm(t, s, H)
    p = 2.0 * H
    return _scalar(_origin(2.0**-K * _bracket(t, s, p, K), t, s))


def _ext(t, s, ht, hs, K):
    a = ht + hs
    d = eval_D(ht, hs)
    return _origin(d**K * _bracket(t, s, a, K), t, s)


def cov_mbm(t, s, hf):
    """Standard multifractional Brownian motion covariance."""
    t, s = _times(t, s)
    return _scalar(_ext(t, s, hf(t), hf(s), 1.0))


def cov_ext(t, s, hf, K):
    """Covariance of the multifractional bifractional process.

    ``D(H(t),H(s))^K [(t^a + s^a)^K - |t-s|^{aK}]`` with ``a = H(t) + H(s)``.
    Reduces to :func:`cov_mbm` at K = 1 and to :func:`cov_bfbm` for a
    constant Hurst function.
    """
    t, s = _times(t, s)
    K = _check_K(K)
    return _scalar(_ext(t, s, np.asarray(hf(t)), np.asarray(hf(s)), K))


def cov_xk(t, s, K):
    """Covariance (Γ(1-K)/K)[t^K + s^K - (t+s)^K] of the auxiliary process X^K."""
    t, s = _times(t, s)
    K = _check_K(K, allow_one=False)
    c = math.gamma(1.0 - K) / K
    hi, lo = np.maximum(t, s), np.minimum(t, s)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(hi > 0, lo / np.where(hi > 0, hi, 1.0), 0.0)
    # t^K + s^K - (t+s)^K = hi^K [r^K - expm1(K log1p(r))]
    return _scalar(_origin(c * hi**K * (r**K - np.expm1(K * np.log1p(r))), t, s))


def decomposition_constants(K):
    """Return ``(C1(K), C2(K))`` of the bifractional decomposition in law.

    ``C1 X^{H,K} + B^{H,K}`` has the law of ``C2 B^{HK}`` for independent
    summands.
    """
    K = _check_K(K, allow_one=False)
    return math.sqrt(2.0**-K * K / math.gamma(1.0 - K)), 2.0 ** ((1.0 - K) / 2)


def _xk_of_powers(t, s, a, K):
    """``cov_xk(t^a, s^a, K)`` from the ratio ``min/max``, so that a tiny
    ``s^a`` cannot underflow before the ``K``-th power is taken."""
    hi, lo = np.maximum(t, s), np.minimum(t, s)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(hi > 0, lo / np.where(hi > 0, hi, 1.0), 0.0)
    c = math.gamma(1.0 - K) / K
    val = c * hi ** (a * K) * (r ** (a * K) - np.expm1(K * np.log1p(r**a)))
    return _origin(val, t, s)


def decomposition_residual(t, s, hf, K):
    """Relative residual of the covariance identity linking X^K, the process
    and a multifractional kernel with exponents H(.)K.

    With ``a = H(t) + H(s)`` and ``d = D(H(t), H(s))``::

        (K d^K / Γ(1-K)) cov_xk(t^a, s^a) + cov_ext(t, s)
            = (d^K / D(H(t)K, H(s)K)) * mbm_{HK}(t, s)

    where ``mbm_{HK}`` is the standard multifractional kernel with Hurst
    function ``H(.)K``.  The coefficient on the right carries no extra
    factor K; with it the identity does not balance.
    """
    t, s = _times(t, s)
    K = _check_K(K, allow_one=False)
    ht, hs = np.asarray(hf(t)), np.asarray(hf(s))
    a = ht + hs
    dk = eval_D(ht, hs) ** K
    lhs = K * dk / math.gamma(1.0 - K) * _xk_of_powers(t, s, a, K) + cov_ext(t, s, hf, K)
    mbm_hk = _origin(eval_D(ht * K, hs * K) * _bracket(t, s, a * K, 1.0), t, s)
    rhs = dk / eval_D(ht * K, hs * K) * mbm_hk
    scale = np.maximum(np.abs(lhs), np.abs(rhs))
    res = np.where(scale > 0, np.abs(lhs - rhs) / np.where(scale > 0, scale, 1.0), 0.0)
    return _scalar(res)


def tk_identity_quadrature(t, K):
    """Evaluate ``(K/Γ(1-K)) ∫_0^∞ (1 - e^{-tx}) x^{-1-K} dx`` by quadrature.

    The integral is split at x = 1.  The head carries the x^{-K} singularity
    as an algebraic weight; the tail is mapped through x -> 1/u, which turns
    it into ``∫_0^1 (1 - e^{-t/u}) u^{K-1} du``.
    """
    t = float(t)
    if t < 0:
        raise DomainError("t must be non-negative")
    K = _check_K(K, allow_one=False)
    if t == 0.0:
        return 0.0

    def head(x):
        return -math.expm1(-t * x) / x if x > 0 else t

    def tail(u):
        return -math.expm1(-t / u) if u > 0 else 1.0

    value, _ = quadrature.half_line(head, tail, head_alg=-K, tail_alg=K - 1.0,
                                    epsabs=1e-10, epsrel=1e-13)
    return K / math.gamma(1.0 - K) * value


def tk_identity_residual(t, K):
    """``|quadrature - t^K|`` for the integral representation of t^K."""
    return abs(tk_identity_quadrature(t, K) - float(t) ** float(K))


# -- high precision ---------------------------------------------------------


def eval_D_mp(x, y):
    x, y = sorted((mpmath.mpf(x), mpmath.mpf(y)))
    if x == y:
        return mpmath.mpf(1) / 2
    num = mpmath.sqrt(mpmath.gamma(2 * x + 1) * mpmath.gamma(2 * y + 1)
                      * mpmath.sin(mpmath.pi * x) * mpmath.sin(mpmath.pi * y))
    return num / (2 * mpmath.gamma(x + y + 1) * mpmath.sin(mpmath.pi * (x + y) / 2))


def cov_ext_mp(t, s, ht, hs, K):
    """High-precision extended kernel given the Hurst values at t and s."""
    t, s, K = mpmath.mpf(t), mpmath.mpf(s), mpmath.mpf(K)
    a = mpmath.mpf(ht) + mpmath.mpf(hs)
    gap = abs(t - s)
    tail = gap ** (a * K) if gap > 0 else mpmath.mpf(0)
    head = t**a + s**a if (t > 0 or s > 0) else mpmath.mpf(0)
    return eval_D_mp(ht, hs) ** K * (head**K - tail)


def cov_xk_mp(t, s, K):
    t, s, K = mpmath.mpf(t), mpmath.mpf(s), mpmath.mpf(K)
    return mpmath.gamma(1 - K) / K * (t**K + s**K - (t + s) ** K)

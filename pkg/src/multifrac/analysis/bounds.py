"""Second-moment bounds: quasi-helix sandwich, Hölder upper/lower bounds,
and the Hurst-displacement constants of the bifractional family."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import kernels, quadrature
from ..errors import DomainError
from ..process import Family, ProcessSpec
from ..simulate import TimeGrid
from .report import VerificationReport

__all__ = [
    "gaussian_abs_moment",
    "bfbm_increment_variance",
    "increment_second_moment",
    "quasi_helix_audit",
    "x_displacement_variance",
    "Prop2Constants",
    "prop2_constants",
    "prop2_bound_audit",
    "holder_bounds_audit",
]


def gaussian_abs_moment(alpha, variance):
    """``E|Y|^alpha`` for centred Gaussian Y with the given variance."""
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    if variance < 0:
        raise DomainError("variance must be non-negative")
    c = 2 ** (alpha / 2) * math.gamma((alpha + 1) / 2) / math.gamma(0.5)
    return c * variance ** (alpha / 2)


def bfbm_increment_variance(t, s, H, K):
    """``E(B_t - B_s)^2`` for the bifractional family without cancellation.

    Writing ``q = (lo/hi)^{2H} - 1``, the smooth part equals
    ``hi^{2HK} [(1+q)^K + 1 - 2(1+q/2)^K]``, evaluated with expm1/log1p so
    it keeps full relative precision when the two times nearly coincide.
    """
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(t < 0) or np.any(s < 0):
        raise DomainError("times must be non-negative")
    hi, lo = np.maximum(t, s), np.minimum(t, s)
    gap = (hi - lo) ** (2 * H * K)
    if K == 1.0:
        return gap if gap.ndim else float(gap)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.expm1(2 * H * np.log(np.where(hi > 0, lo / np.where(hi > 0, hi, 1), 1.0)))
        g = np.expm1(K * np.log1p(q)) - 2 * np.expm1(K * np.log1p(q / 2))
    smooth = np.where(hi > 0, hi ** (2 * H * K) * g, 0.0)
    out = smooth + 2.0 ** (1 - K) * gap
    out = np.maximum(out, 0.0)
    return out if out.ndim else float(out)


def increment_second_moment(spec, t, s):
    """``E(X_t - X_s)^2 = cov(t,t) + cov(s,s) - 2 cov(t,s)``, floored at 0."""
    const = spec.as_bfbm if spec.family in (Family.FBM, Family.BFBM) else None
    if const is not None:
        return bfbm_increment_variance(t, s, *const)
    v = spec.cov(t, t) + spec.cov(s, s) - 2 * np.asarray(spec.cov(t, s))
    v = np.maximum(v, 0.0)
    return v if np.ndim(v) else float(v)


def quasi_helix_audit(H, K, grid, slack=1e-12):
    """Check ``2^-K |t-s|^{2HK} <= E(B_t-B_s)^2 <= 2^{1-K} |t-s|^{2HK}`` on all pairs."""
    if not isinstance(grid, TimeGrid):
        grid = TimeGrid(grid)
    spec = ProcessSpec.bfbm(H, K)
    t = grid.points
    i, j = np.triu_indices(t.size, k=1)
    inc = increment_second_moment(spec, t[i], t[j])
    base = np.abs(t[i] - t[j]) ** (2 * H * K)
    lower, upper = 2.0**-K * base, 2.0 ** (1 - K) * base
    low_ok = inc >= lower * (1 - slack)
    up_ok = inc <= upper * (1 + slack)
    violations = int(np.sum(~low_ok) + np.sum(~up_ok))
    ratio = inc / base
    return VerificationReport(
        "quasi-helix",
        {"H": H, "K": K, "n_grid": int(t.size), "slack": slack},
        (("violations", violations), ("pairs", int(i.size)),
         ("min_ratio", float(ratio.min())), ("max_ratio", float(ratio.max())),
         ("lower_const", 2.0**-K), ("upper_const", 2.0 ** (1 - K))),
        target=0, tolerance=0, mode="le",
        notes="ratio = E(B_t-B_s)^2 / |t-s|^{2HK}; diagonal pairs are 0 <= 0 <= 0",
    )


def x_displacement_variance(t, H, H2, K, epsabs=1e-14, epsrel=1e-10):
    """``∫_0^∞ (e^{-θ t^{2H2}} - e^{-θ t^{2H}})^2 θ^{-(1+K)} dθ`` by quadrature.

    This is the second moment of the Hurst displacement of the auxiliary
    process ``X^K_{t^{2H}}``.
    """
    if t < 0:
        raise DomainError("t must be non-negative")
    kernels._check_open_unit("H", H)
    kernels._check_open_unit("H2", H2)
    K = kernels._check_K(K, allow_one=False)
    H, H2 = sorted((float(H), float(H2)))
    if H == H2 or t == 0 or t == 1:
        return 0.0
    a, b = t ** (2 * H), t ** (2 * H2)
    lo, gap = min(a, b), abs(a - b)

    def diff(theta):
        return math.exp(-theta * lo) * -math.expm1(-theta * gap)

    def head(theta):
        # weight theta^{1-K} carries the small-theta behaviour
        if theta == 0:
            return gap * gap
        d = diff(theta) / theta
        return d * d

    def tail(u):
        if u == 0:
            return 0.0
        d = diff(1.0 / u)
        return d * d

    value, _ = quadrature.half_line(head, tail, head_alg=1.0 - K, tail_alg=K - 1.0,
                                    epsabs=epsabs, epsrel=epsrel)
    return max(value, 0.0)


@dataclass(frozen=True)
class Prop2Constants:
    """Constants bounding Hurst displacements on ``t in [a, b]``, ``H in [alpha, gamma]``.

    ``C1`` bounds the fractional term, ``C2`` the auxiliary term for
    ``t <= 1`` and ``C3`` for ``t >= 1``; ``C_final = max(C2, C3)``.
    """

    a: float
    b: float
    alpha: float
    gamma: float
    K: float
    C1: float
    C2: float
    C3: float

    @property
    def C_final(self):
        return max(self.C2, self.C3)

    def bifractional(self):
        """Constant C with ``E(B^{H,K}_t - B^{H',K}_t)^2 <= C |H - H'|^2``.

        Combines the two terms of the decomposition in law through
        ``(x + y)^2 <= 2x^2 + 2y^2``; at K = 1 only the fractional term remains.
        """
        if self.K == 1.0:
            return self.C1
        c1, c2 = kernels.decomposition_constants(self.K)
        return 2 * c2**2 * self.C1 + 2 * c1**2 * self.C_final


def _gamma_integral(c, K, **kw):
    # ∫_0^1 + ∫_1^∞ of e^{-2θc} θ^{1-K}
    head, _ = quadrature.panel(lambda th: math.exp(-2 * th * c), 0.0, 1.0, alg=1.0 - K, **kw)
    tail, _ = quadrature.panel(lambda th: math.exp(-2 * th * c) * th ** (1 - K), 1.0, np.inf, **kw)
    return head + tail


def prop2_constants(a, b, alpha, gamma, K, n_grid=256):
    """Evaluate the three displacement constants by quadrature.

    Suprema over t run over ``n_grid`` equally spaced points of ``[a, b]``;
    t = 0 is skipped because both displacements vanish there while the
    crude bound for ``t <= 1`` does not.
    """
    if not (0 <= a < b):
        raise DomainError("need 0 <= a < b")
    if not (0 < alpha <= gamma < 1):
        raise DomainError("need 0 < alpha <= gamma < 1")
    K = float(K)
    if not 0 < K <= 1:
        raise DomainError("K must lie in (0, 1]")
    ts = np.linspace(a, b, n_grid)
    ts = ts[ts > 0]
    kw = dict(epsabs=1e-12, epsrel=1e-10)

    log_tail, _ = quadrature.panel(
        lambda th: math.log(th) ** 2 * th ** (-2 * alpha - 1), 1.0, np.inf, **kw)

    def c1_head(t):
        f = lambda th: 2 * math.sin(0.5 * t * th) ** 2 * th ** (-2 * gamma - 1) * math.log(th) ** 2 if th > 0 else 0.0
        return quadrature.panel(f, 0.0, 1.0, **kw)[0]

    C1 = 4 * max(c1_head(t) + log_tail for t in ts)
    C2 = max(_gamma_integral(t ** (2 * gamma), K, **kw) for t in ts) / (math.e * alpha) ** 2
    grow = max(4 * t ** (4 * gamma) * math.log(t) ** 2 for t in ts)
    C3 = grow * max(_gamma_integral(t ** (2 * alpha), K, **kw) for t in ts)
    return Prop2Constants(a, b, alpha, gamma, K, C1, C2, C3)


def prop2_bound_audit(a, b, alpha, gamma, K, n_samples=100, seed=0, constants=None):
    """Check ``x_displacement_variance <= C_final |H - H'|^2`` at random points."""
    c = constants or prop2_constants(a, b, alpha, gamma, K)
    rng = np.random.default_rng(seed)
    worst, violations = 0.0, 0
    for _ in range(int(n_samples)):
        t = rng.uniform(a, b)
        h1, h2 = rng.uniform(alpha, gamma, size=2)
        v = x_displacement_variance(t, h1, h2, K, epsrel=1e-10)
        bound = c.C_final * (h1 - h2) ** 2
        if v > bound:
            violations += 1
        if bound > 0:
            worst = max(worst, v / bound)
    return VerificationReport(
        "prop2",
        {"a": a, "b": b, "alpha": alpha, "gamma": gamma, "K": K,
         "n_samples": int(n_samples), "seed": seed},
        (("violations", violations), ("max_ratio", worst), ("C1", c.C1),
         ("C2", c.C2), ("C3", c.C3), ("C_final", c.C_final)),
        target=0, tolerance=0, mode="le",
        notes="max_ratio = displacement variance / (C_final |H-H'|^2)",
    )


def _pairs(rng, n):
    t, s = rng.uniform(0, 1, size=(2, n))
    keep = t != s
    return t[keep], s[keep], int(np.sum(~keep))


def holder_bounds_audit(hf, K, n_pairs=10_000, seed=0, constants=None):
    """Empirical Hölder upper and lower constants of the extended process on [0,1].

    Upper: ``C_hat = max E(B_t-B_s)^2 / |t-s|^{2 max(H(t),H(s)) K}`` must be
    finite and at most ``C4 = 2^{2-K} + 2 C'`` with ``C' = C_disp L^2``,
    where ``C_disp`` bounds bifractional Hurst displacements over [0,1] and
    L is the fitted Hölder (here Lipschitz) constant of ``hf``.

    Lower: pairs with ``|t-s| < delta`` where
    ``delta = ½ (1/(2^{1+K} C'') ∧ 1)^eta``, ``eta = ½ (beta - K sup H)^{-1}``
    and ``C'' = C'``; ``M_hat = min E(B_t-B_s)^2 / |t-s|^{2 min(H(t),H(s)) K}``
    must be positive.
    """
    rng = np.random.default_rng(seed)
    spec = ProcessSpec.ext(hf, K)
    beta = hf.holder_exponent
    mu, nu = hf.range_lo, hf.range_hi
    if not nu < beta:
        raise DomainError("Hölder bounds need sup H < beta")

    t, s, degenerate = _pairs(rng, int(n_pairs))
    ht, hs = hf(t), hf(s)
    gap = np.abs(t - s)
    inc = increment_second_moment(spec, t, s)
    c_hat = float(np.max(inc / gap ** (2 * np.maximum(ht, hs) * K)))

    # fitted Hölder constant of hf on the same pairs plus a fine lattice
    grid = np.linspace(0, 1, 4097)
    lip = np.abs(np.diff(hf(grid))) / np.diff(grid) ** beta
    holder_c = float(max(np.max(np.abs(ht - hs) / gap**beta), np.max(lip)))

    if hf.is_constant:
        c_disp = 0.0
    else:
        c_disp = (constants or prop2_constants(0.0, 1.0, mu, nu, K)).bifractional()
    c_prime = c_disp * holder_c**2
    c4 = 2.0 ** (2 - K) + 2 * c_prime

    eta = 0.5 / (beta - K * nu)
    base = 1.0 if c_prime == 0 else min(1.0, 1.0 / (2 ** (1 + K) * c_prime))
    delta = 0.5 * base**eta
    m_recipe = 2.0 ** (-1 - K) - c_prime * delta ** (2 * (beta - K * nu))

    # lower-bound pairs: anchor uniformly, offset log-uniformly below delta
    n_low = int(n_pairs)
    anchor = rng.uniform(0, 1, n_low)
    offset = delta * 10 ** rng.uniform(-3, 0, n_low) * rng.choice([-1.0, 1.0], n_low)
    other = np.clip(anchor + offset, 0, 1)
    keep = (other != anchor) & (np.abs(other - anchor) < delta)
    ta, tb = anchor[keep], other[keep]
    inc_low = increment_second_moment(spec, ta, tb)
    m_hat = float(np.min(inc_low / np.abs(ta - tb) ** (2 * np.minimum(hf(ta), hf(tb)) * K)))

    failures = int(not np.isfinite(c_hat)) + int(c_hat > c4) + int(not m_hat > 0)
    return VerificationReport(
        "holder",
        {"hurst": hf.to_string() if hf.kind != "tabulated" else "tabulated", "K": K,
         "n_pairs": int(n_pairs), "seed": seed},
        (("failures", failures), ("C_hat", c_hat), ("C4", c4), ("C_prime", c_prime),
         ("holder_constant", holder_c), ("M_hat", m_hat), ("M_recipe", m_recipe),
         ("delta", delta), ("lower_pairs", int(ta.size)), ("skipped_equal_pairs", degenerate)),
        target=0, tolerance=0, mode="le",
        notes="passes when C_hat is finite, C_hat <= C4 and M_hat > 0; "
              f"{degenerate} pairs with t == s skipped",
    )

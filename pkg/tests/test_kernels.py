import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multifrac import (DomainError, HurstFunction, cov_bfbm, cov_ext, cov_fbm, cov_mbm, cov_xk,
                       decomposition_residual, eval_D, tk_identity_residual)
from multifrac import kernels
from multifrac.errors import QuadratureError


def D_oracle(x, y):
    """Closed form evaluated directly with mpmath gamma and sine."""
    with mpmath.workdps(40):
        x, y = mpmath.mpf(x), mpmath.mpf(y)
        num = mpmath.gamma(2 * x + 1) * mpmath.gamma(2 * y + 1) * mpmath.sin(mpmath.pi * x) * mpmath.sin(mpmath.pi * y)
        den = 2 * mpmath.gamma(x + y + 1) * mpmath.sin(mpmath.pi * (x + y) / 2)
        return float(mpmath.sqrt(num) / den)


SINE = HurstFunction.sine(0.3, 0.7, 3.0, 0.4)
unit = st.floats(0.01, 0.99)
# subnormal times carry too few significant bits for relative identities
times = st.floats(0.0, 50.0, allow_subnormal=False)
Ks = st.floats(0.05, 1.0)


# -- D(x, y) -----------------------------------------------------------------

def test_D_diagonal_is_half():
    assert eval_D(0.4, 0.4) == 0.5
    assert eval_D(0.93, 0.93) == 0.5


def test_D_frozen_values():
    assert eval_D(0.2, 0.8) == pytest.approx(0.3309985378942112, rel=1e-14)
    assert eval_D(0.1, 0.6) == pytest.approx(0.3367482490320449, rel=1e-14)


@settings(max_examples=100, deadline=None)
@given(x=unit, y=unit)
def test_D_matches_gamma_oracle_and_is_symmetric(x, y):
    assert eval_D(x, y) == eval_D(y, x)
    assert eval_D(x, y) == pytest.approx(D_oracle(x, y), rel=1e-12)


@pytest.mark.parametrize("x,y", [(0.0, 0.5), (1.0, 0.5), (0.5, -0.1), (0.5, 1.5)])
def test_D_domain(x, y):
    with pytest.raises(DomainError):
        eval_D(x, y)


# -- closed-form examples -----------------------------------------------------

def test_fbm_examples():
    assert cov_fbm(2, 1, 0.5) == pytest.approx(1.0, abs=1e-15)
    assert cov_fbm(5, 0, 0.3) == 0.0
    assert cov_fbm(3, 3, 0.7) == pytest.approx(4.655536721746079, rel=1e-14)


def test_bfbm_examples():
    assert cov_bfbm(4, 4, 0.6, 0.5) == pytest.approx(2.2973967099940700, rel=1e-14)
    assert cov_bfbm(3, 0, 0.6, 0.5) == 0.0
    assert cov_bfbm(2, 1, 0.6, 0.4) == pytest.approx(0.4635376843284994, rel=1e-14)
    assert cov_bfbm(2.5, 1.5, 0.3, 1.0) == cov_fbm(2.5, 1.5, 0.3)


def test_mbm_examples():
    c = HurstFunction.constant(0.3)
    assert cov_mbm(2, 1, c) == pytest.approx(cov_fbm(2, 1, 0.3), rel=1e-15)
    assert cov_mbm(2.0, 2.0, SINE) == pytest.approx(2.0 ** (2 * SINE(2.0)), rel=1e-14)
    assert cov_mbm(2.0, 0.0, SINE) == 0.0


def test_ext_frozen_value():
    # mpmath evaluation of the closed form with H(2.5), H(0.7) from the sine
    assert cov_ext(2.5, 0.7, SINE, 0.6) == pytest.approx(0.3776976488497779, rel=1e-14)


def test_xk_examples():
    assert cov_xk(1, 1, 0.5) == pytest.approx(2 * math.sqrt(math.pi) * (2 - math.sqrt(2)), rel=1e-14)
    assert cov_xk(3, 0, 0.4) == 0.0
    t, K = 2.7, 0.3
    assert cov_xk(t, t, K) == pytest.approx(math.gamma(1 - K) / K * (2 - 2**K) * t**K, rel=1e-14)


def test_xk_rejects_K_one():
    with pytest.raises(DomainError):
        cov_xk(1, 1, 1.0)


def test_negative_time_rejected():
    with pytest.raises(DomainError):
        cov_fbm(-1, 1, 0.5)
    with pytest.raises(DomainError):
        cov_ext(1, -1, SINE, 0.5)


def test_vectorised_matches_scalar():
    t = np.array([0.3, 1.0, 2.5])
    s = np.array([1.1, 1.0, 0.2])
    v = cov_ext(t, s, SINE, 0.7)
    assert v.shape == (3,)
    for i in range(3):
        assert v[i] == cov_ext(t[i], s[i], SINE, 0.7)


# -- properties --------------------------------------------------------------

def _hf(kind, mu, nu):
    lo, hi = min(mu, nu), max(mu, nu)
    return {
        "constant": HurstFunction.constant(lo),
        "sine": HurstFunction.sine(lo, hi, 2.0, 0.3),
        "logistic": HurstFunction.logistic(lo, hi, 2.0, 1.5),
        "linear": HurstFunction.linear(lo, (hi - lo) / 50, lo, hi),
    }[kind]


hurst_fns = st.builds(_hf, st.sampled_from(["constant", "sine", "logistic", "linear"]),
                      st.floats(0.05, 0.95), st.floats(0.05, 0.95))


@settings(max_examples=150, deadline=None)
@given(t=times, s=times, hf=hurst_fns, K=Ks, H=unit)
def test_symmetry_exact(t, s, hf, K, H):
    assert cov_ext(t, s, hf, K) == cov_ext(s, t, hf, K)
    assert cov_mbm(t, s, hf) == cov_mbm(s, t, hf)
    assert cov_bfbm(t, s, H, K) == cov_bfbm(s, t, H, K)
    assert cov_fbm(t, s, H) == cov_fbm(s, t, H)
    if K < 1:
        assert cov_xk(t, s, K) == cov_xk(s, t, K)


@settings(max_examples=150, deadline=None)
@given(t=st.floats(0.01, 50), s=st.floats(0.01, 50), hf=hurst_fns, K=Ks, H=unit)
def test_reduction_lattice(t, s, hf, K, H):
    b = cov_bfbm(t, s, H, K)
    assert cov_ext(t, s, HurstFunction.constant(H), K) == pytest.approx(b, rel=1e-13, abs=1e-300)
    assert cov_ext(t, s, hf, 1.0) == pytest.approx(cov_mbm(t, s, hf), rel=1e-13)
    assert cov_bfbm(t, s, H, 1.0) == pytest.approx(cov_fbm(t, s, H), rel=1e-13)


@settings(max_examples=150, deadline=None)
@given(t=st.floats(1e-3, 100), hf=hurst_fns, K=Ks)
def test_diagonal_law(t, hf, K):
    assert cov_ext(t, t, hf, K) == pytest.approx(t ** (2 * hf(t) * K), rel=1e-13)


@settings(max_examples=60, deadline=None)
@given(t=times, hf=hurst_fns, K=Ks, H=unit)
def test_zero_boundary(t, hf, K, H):
    assert cov_ext(t, 0.0, hf, K) == 0.0
    assert cov_mbm(0.0, t, hf) == 0.0
    assert cov_bfbm(0.0, t, H, K) == 0.0
    assert cov_fbm(t, 0.0, H) == 0.0


@settings(max_examples=150, deadline=None)
@given(t=st.floats(0.01, 50), s=st.floats(0.01, 50), hf=hurst_fns, K=Ks)
def test_cauchy_schwarz(t, s, hf, K):
    c = cov_ext(t, s, hf, K)
    assert c * c <= cov_ext(t, t, hf, K) * cov_ext(s, s, hf, K) * (1 + 1e-12)


@settings(max_examples=100, deadline=None)
@given(t=st.floats(0.01, 50), s=st.floats(0.01, 50), K=st.floats(0.01, 0.99))
def test_xk_nonnegative(t, s, K):
    assert cov_xk(t, s, K) >= 0


# -- identities ----------------------------------------------------------------

def test_decomposition_constant_case_against_bfbm_form():
    H, K, t, s = 0.6, 0.4, 2.0, 1.0
    c1, c2 = kernels.decomposition_constants(K)
    lhs = c1**2 * cov_xk(t ** (2 * H), s ** (2 * H), K) + cov_bfbm(t, s, H, K)
    rhs = c2**2 * cov_fbm(t, s, H * K)
    assert lhs == pytest.approx(rhs, rel=1e-13)
    assert decomposition_residual(t, s, HurstFunction.constant(H), K) <= 1e-12


def test_decomposition_extra_K_coefficient_does_not_balance():
    # carrying an extra factor K on the right-hand side breaks the identity
    hf, K, t, s = SINE, 0.7, 3.0, 1.0
    ht, hs = hf(t), hf(s)
    a = ht + hs
    dk = eval_D(ht, hs) ** K
    lhs = K * dk / math.gamma(1 - K) * cov_xk(t**a, s**a, K) + cov_ext(t, s, hf, K)
    rhs = K * dk * (t ** (a * K) + s ** (a * K) - abs(t - s) ** (a * K))
    assert abs(lhs - rhs) / abs(lhs) > 0.1
    assert decomposition_residual(t, s, hf, K) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(t=times, s=times, hf=hurst_fns, K=st.floats(0.02, 0.98))
def test_decomposition_residual_property(t, s, hf, K):
    assert decomposition_residual(t, s, hf, K) <= 1e-12


def test_decomposition_diagonal():
    assert decomposition_residual(1.7, 1.7, SINE, 0.3) <= 1e-13


@pytest.mark.parametrize("t,K,value", [(1.0, 0.5, 1.0), (4.0, 0.5, 2.0), (0.0, 0.3, 0.0)])
def test_tk_identity_examples(t, K, value):
    assert kernels.tk_identity_quadrature(t, K) == pytest.approx(value, abs=1e-8)
    assert tk_identity_residual(t, K) <= 1e-8


def test_tk_identity_zero_exact():
    assert kernels.tk_identity_quadrature(0.0, 0.7) == 0.0


@pytest.mark.parametrize("t", np.logspace(-3, 2, 9))
@pytest.mark.parametrize("K", [0.05, 0.25, 0.5, 0.75, 0.95])
def test_tk_identity_log_grid(t, K):
    assert tk_identity_residual(t, K) <= 1e-8


def test_quadrature_error_carries_achieved():
    from multifrac import quadrature
    with pytest.raises(QuadratureError) as info:
        quadrature.panel(lambda x: math.sin(1 / x) / x**2 if x else 0.0, 0.0, 1.0, limit=5,
                         epsabs=1e-14, epsrel=1e-14)
    assert info.value.achieved > 0


def test_mp_kernels_agree_with_float():
    t, s, K = 3.3, 1.2, 0.45
    ht, hs = SINE(t), SINE(s)
    with mpmath.workdps(30):
        assert float(kernels.cov_ext_mp(t, s, ht, hs, K)) == pytest.approx(cov_ext(t, s, SINE, K), rel=1e-13)
        assert float(kernels.cov_xk_mp(t, s, K)) == pytest.approx(cov_xk(t, s, K), rel=1e-13)
        assert float(kernels.eval_D_mp(0.2, 0.8)) == pytest.approx(0.3309985378942111, rel=1e-15)

import numpy as np
import pytest

from multifrac import HurstFunction, kernels
from multifrac.analysis import lass_covariance_limit, rescaled_increment_cov, small_increment_ratio

SINE = HurstFunction.sine(0.3, 0.7, 1.0, 0.0)


@pytest.mark.parametrize("H,K,t,target", [(0.6, 0.5, 1.0, 2**0.5), (0.3, 0.9, 5.0, 2**0.1)])
def test_small_increment_examples(H, K, t, target):
    r = small_increment_ratio(H, K, t)
    assert r.limit == pytest.approx(target, rel=1e-4)
    assert r.report.passed
    assert r.monotone_tail


def test_small_increment_fbm_ratio_is_one():
    r = small_increment_ratio(0.4, 1.0, 2.0)
    np.testing.assert_allclose(r.values, 1.0, rtol=1e-12)


def test_small_increment_random():
    rng = np.random.default_rng(12)
    for _ in range(10):
        H, K = rng.uniform(0.05, 0.95, size=2)
        t = rng.uniform(0.1, 10)
        assert small_increment_ratio(H, K, t).report.passed


def test_lass_sine_example():
    r = lass_covariance_limit(SINE, 0.6, 1.0)
    assert r.report.passed
    assert r.monotone_tail
    assert r.limit[1, 1] == pytest.approx(2**0.4, rel=1e-3)


def test_lass_constant_diagonal():
    H, K = 0.7, 0.4
    r = lass_covariance_limit(HurstFunction.constant(H), K, 2.0)
    u = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(np.diag(r.limit), 2 ** (1 - K) * u ** (2 * H * K), rtol=1e-3)


def test_lass_fbm_self_similar_every_rho():
    H = 0.35
    u = np.array([0.5, 1.0, 2.0])
    target = kernels.cov_fbm(u[:, None], u[None, :], H)
    for rho in (1e-1, 1e-3):
        c = rescaled_increment_cov(HurstFunction.constant(H), 1.0, 1.5, u, rho)
        np.testing.assert_allclose(c, target, rtol=1e-8)

import math

import numpy as np
import pytest

from multifrac import HurstFunction, ProcessSpec
from multifrac.analysis import (correlation, increment_correlation, lattice_t_grid, leading_exponent,
                                lrd_increment_audit, lrd_process_audit, memory_classification)
from multifrac.analysis.lrd import default_t_grid

C = HurstFunction.constant


def test_correlation_examples():
    bm = ProcessSpec.bfbm(0.5, 1.0)
    assert correlation(bm, 1.0, 4.0) == pytest.approx(0.5, rel=1e-14)
    assert correlation(bm, 2.0, 2.0) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(ZeroDivisionError):
        correlation(bm, 0.0, 1.0)


def test_correlation_bounded_on_random_grid():
    spec = ProcessSpec.ext(HurstFunction.sine(0.2, 0.8, 2.0, 0.1), 0.4)
    t = np.random.default_rng(2).uniform(0.01, 20, size=200)
    c = correlation(spec, t[:, None], t[None, :])
    assert np.all(np.abs(c) <= 1 + 1e-12)


def test_increment_correlation_examples():
    assert abs(increment_correlation(ProcessSpec.fbm(0.5), 0.0, 2.0)) < 1e-13
    # ½[(n+1)^1.6 + (n-1)^1.6 - 2 n^1.6] at n = 2, unit-variance increments
    assert increment_correlation(ProcessSpec.fbm(0.8), 3.0, 5.0) == pytest.approx(0.3683399343768480, rel=1e-12)
    assert increment_correlation(ProcessSpec.bfbm(0.7, 0.4), 2.0, 2.0) == pytest.approx(1.0, rel=1e-14)


def test_leading_exponent_switches_at_a_equal_one():
    assert leading_exponent(1.6, 0.8) == pytest.approx(1.6 * 0.8 - 1)
    assert leading_exponent(0.6, 0.5) == pytest.approx(0.6 * (0.5 - 1))
    assert leading_exponent(1.0, 0.3) == pytest.approx(-0.7)


def test_process_audit_long_regime():
    r = lrd_process_audit(C(0.8), 0.8)
    assert r.passed and not r.skipped
    assert r.value("cov_slope") == pytest.approx(0.28, abs=0.05)
    assert r.value("cor_slope") == pytest.approx(-0.36, abs=0.05)


def test_process_audit_short_regime_uses_leading_term():
    r = lrd_process_audit(C(0.3), 0.5)
    assert r.passed and not r.skipped
    assert r.value("cov_slope") == pytest.approx(-0.3, abs=0.05)
    # the correlation decays like t^{-H(t) + (K-1) H(s)}, not t^{-H(t)}
    assert r.value("cor_slope") == pytest.approx(-0.45, abs=0.05)
    assert abs(r.value("cor_slope") + 0.3) > 0.1


def test_process_audit_brownian_flat():
    r = lrd_process_audit(C(0.5), 1.0, s=1.0)
    assert r.value("cov_slope") == pytest.approx(0.0, abs=1e-6) or r.skipped


def test_process_audit_boundary_skipped():
    r = lrd_process_audit(C(0.5), 1.0 / (2 * 0.5) * 0.995)
    assert r.skipped


def test_increment_audit_constant_is_degenerate():
    r = lrd_increment_audit(C(0.6), 0.7, 1.0, default_t_grid())
    assert r.skipped and "degenerate" in r.notes


def test_increment_audit_linear_saturates_degenerate():
    hf = HurstFunction.linear(0.55, 0.2 / 1e9, 0.55, 0.75)
    r = lrd_increment_audit(hf, 0.9, 1.0, default_t_grid())
    assert r.skipped


@pytest.mark.parametrize("K,mu,nu", [(0.9, 0.4, 0.9), (0.4, 0.2, 0.8)])
def test_increment_audit_lattice_sine(K, mu, nu):
    hf = HurstFunction.sine(mu, nu, 2.0, 0.7)
    r = lrd_increment_audit(hf, K, 1.5, lattice_t_grid(2.0, 0.0))
    assert not r.skipped
    assert r.passed
    assert r.value("max_slope_error") <= 0.05


def test_memory_examples():
    long_ = memory_classification(ProcessSpec.bfbm(0.9, 0.7))
    assert long_.label == "LONG" and long_.report.passed
    assert long_.tail_exponent == pytest.approx(2 * 0.9 * 0.7 - 2, abs=0.03)
    short = memory_classification(ProcessSpec.bfbm(0.3, 0.5))
    assert short.label == "SHORT" and short.report.passed
    bm = memory_classification(ProcessSpec.bfbm(0.5, 1.0))
    assert bm.label == "SHORT"
    assert bm.partial_sums[-1] == pytest.approx(1.0, abs=1e-10)


def test_memory_boundary():
    r = memory_classification(ProcessSpec.bfbm(0.625, 0.8))
    assert r.label == "BOUNDARY" and r.report.skipped


def test_memory_needs_enough_terms():
    from multifrac import DomainError
    with pytest.raises(DomainError):
        memory_classification(ProcessSpec.bfbm(0.9, 0.7), n_terms=100)


def test_memory_dichotomy_sweep():
    rng = np.random.default_rng(4)
    checked = 0
    while checked < 6:
        H, K = rng.uniform(0.1, 0.95), rng.uniform(0.1, 1.0)
        if abs(2 * H * K - 1) <= 0.05:
            continue
        mc = memory_classification(ProcessSpec.bfbm(H, K), n_terms=2000)
        assert mc.label == ("LONG" if 2 * H * K > 1 else "SHORT"), (H, K)
        checked += 1

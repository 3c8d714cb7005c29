"""
Increment bounds
================

Two-sided bounds on increment variances: the constant-exponent sandwich,
its time-varying version, and the displacement bound for the auxiliary
process.
"""

# %%
import numpy as np

import multifrac as mf
from multifrac.analysis import (holder_bounds_audit, prop2_constants, quasi_helix_audit,
                                x_displacement_variance)

# %%
# 2^{-K}|t-s|^{2HK} <= E(B_t - B_s)^2 <= 2^{1-K}|t-s|^{2HK}
grid = mf.TimeGrid(np.linspace(0, 10, 64))
r = quasi_helix_audit(0.7, 0.4, grid)
print(r.line())
print("ratio range", r.value("min_ratio"), r.value("max_ratio"),
      "bounds", r.value("lower_const"), r.value("upper_const"))

# %%
# time-varying exponent: E(B_t - B_s)^2 against |t-s|^{2 max(H(t),H(s)) K}
hf = mf.HurstFunction.sine(0.3, 0.7, 1.0, 0.0)
for K in (0.5, 0.9):
    r = holder_bounds_audit(hf, K, n_pairs=10_000)
    print(f"K={K}: C_hat={r.value('C_hat'):.4f} <= C4={r.value('C4'):.4g}, "
          f"M_hat={r.value('M_hat'):.4f} below delta={r.value('delta'):.3e}")

# %%
# displacement of the auxiliary process between two exponents
c = prop2_constants(0.1, 5.0, 0.2, 0.8, 0.6)
print(f"C1={c.C1:.4g} C2={c.C2:.4g} C3={c.C3:.4g} C_final={c.C_final:.4g}")
for t in (0.5, 2.0, 4.5):
    v = x_displacement_variance(t, 0.4, 0.5, 0.6)
    print(f"t={t}: variance {v:.4e}  bound {c.C_final * 0.1**2:.4e}")

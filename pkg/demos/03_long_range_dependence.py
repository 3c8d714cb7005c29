"""
Long-range dependence
=====================

Large-lag decay of covariances and increment correlations, and the
long/short memory dichotomy of the bifractional process.  Lags reach
1e9, so these computations run in 50-digit arithmetic.
"""

# %%
import numpy as np

import multifrac as mf
from multifrac.analysis import (lattice_t_grid, lrd_increment_audit, lrd_process_audit,
                                memory_classification)

C = mf.HurstFunction.constant

# %%
# cov(t, 1) and cor(t, 1) as t grows, in the two regimes K(H(t)+H(s)) > 1 and < 1
for H, K in ((0.8, 0.8), (0.3, 0.5)):
    r = lrd_process_audit(C(H), K)
    print(f"H={H} K={K}  {r.notes}")
    print(f"  cov slope {r.value('cov_slope'):+.4f}  predicted {r.value('cov_predicted'):+.4f}")
    print(f"  cor slope {r.value('cor_slope'):+.4f}  predicted {r.value('cor_predicted'):+.4f}")

# %%
# unit increments need the four exponent sums to be distinct; a period-2 sine
# sampled on a lattice of period 2 keeps them separated at every t
grid = lattice_t_grid(period=2.0, offset=0.0)
for K, mu, nu in ((0.9, 0.4, 0.9), (0.4, 0.2, 0.8)):
    hf = mf.HurstFunction.sine(mu, nu, 2.0, 0.7)
    r = lrd_increment_audit(hf, K, s=1.5, t_grid=grid)
    print(f"K={K} sine[{mu},{nu}] {r.notes}")
    print(f"  cov_Y slope {r.value('cov_slope'):+.4f} predicted {r.value('cov_predicted'):+.4f}")
    print(f"  cor_Y slope {r.value('cor_slope'):+.4f} predicted {r.value('cor_predicted'):+.4f}")

# %%
# memory: LONG iff 2HK > 1
for H, K in ((0.9, 0.7), (0.3, 0.5), (0.5, 1.0), (0.625, 0.8)):
    mc = memory_classification(mf.ProcessSpec.bfbm(H, K))
    print(f"H={H} K={K} 2HK={2 * H * K:.3f}  {mc.label:<8} tail exponent {mc.tail_exponent:.3f}")

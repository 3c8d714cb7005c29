"""
Local regularity at small scales
================================

Near a fixed time the process looks like a fractional Brownian motion
with exponent H(t)K, scaled so the increment variance tends to 2^{1-K}.
Check it on the kernel, then recover H(t)K from simulated paths.
"""

# %%
import numpy as np

import multifrac as mf
from multifrac.analysis import lass_covariance_limit, small_increment_ratio
from multifrac.estimate import hurst_profile

# %%
# increment variance over eps, divided by eps^{2HK}, for a bifractional process
r = small_increment_ratio(H=0.6, K=0.5, t=1.0)
for eps, v in list(zip(r.steps, r.values))[::4]:
    print(f"eps={eps:.2e}  ratio={v:.8f}")
print(f"extrapolated {r.limit:.10f}  vs 2^(1-K) = {r.target:.10f}")

# %%
# the rescaled increment covariance at t = 1 of the sine process
hf = mf.HurstFunction.sine(0.3, 0.7, 1.0, 0.0)
lass = lass_covariance_limit(hf, K=0.6, t=1.0)
print("limit matrix:\n", np.round(lass.limit, 6))
print("target 2^(1-K) cov_fbm(u, v, H(t)K):\n", np.round(lass.target, 6))
print(lass.report.line())

# %%
# estimate H(t)K along simulated paths
grid = mf.TimeGrid.uniform(0.0, 1.0, 4096)
spec = mf.ProcessSpec.ext(hf, 0.6)
ens = mf.simulate(spec, grid, n_paths=100, master_seed=1, workers=4)
ts = np.linspace(0.1, 0.9, 9)
for est in hurst_profile(ens, ts):
    print(f"t={est.t:.1f}  estimate={est.estimate:.3f} +- {est.stderr:.3f}  "
          f"H(t)K={hf(est.t) * 0.6:.3f}")

# %%
# only the product is identifiable: (H, K) = (0.8, 0.5) and (0.5, 0.8)
for H, K in ((0.8, 0.5), (0.5, 0.8)):
    e = mf.simulate(mf.ProcessSpec.bfbm(H, K), grid, 100, 2, workers=4)
    print(H, K, [round(p.estimate, 3) for p in hurst_profile(e, [0.25, 0.5, 0.75])])

"""Kernel-level verification of bounds, limits and long-range dependence."""

from .bounds import (Prop2Constants, bfbm_increment_variance, gaussian_abs_moment,
                     holder_bounds_audit, increment_second_moment, prop2_bound_audit,
                     prop2_constants, quasi_helix_audit, x_displacement_variance)
from .limits import lass_covariance_limit, rescaled_increment_cov, small_increment_ratio
from .lrd import (correlation, increment_correlation, increment_cov, lattice_t_grid,
                  leading_exponent, lrd_increment_audit, lrd_process_audit,
                  memory_classification)
from .report import ExponentFit, VerificationReport, fit_asymptotic_exponent, richardson
from .identities import (decomposition_audit, psd_audit, psd_sweep, random_hurst_function,
                         random_psd_configs, reduction_audit, tk_identity_audit)
from .montecarlo import abs_moment_audit, covariance_lrt, covariance_mc_audit, lass_mc_audit
from .report import halving_ladder

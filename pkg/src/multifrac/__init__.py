"""Multifractional bifractional Brownian motion: kernels, exact simulation,
numerical verification and local regularity estimation."""

__version__ = "0.1.0"

from .errors import (DegenerateFitError, DomainError, EigenSolverError, FactorizationError,
                     InsufficientPathsError, MultifracError, QuadratureError, WindowError)
from .hurst import HurstFunction, hurst_eval
from .kernels import (cov_bfbm, cov_ext, cov_fbm, cov_mbm, cov_xk, decomposition_residual,
                      eval_D, tk_identity_residual)
from .process import Family, ProcessSpec
from .simulate import (CovarianceMatrix, PathEnsemble, TimeGrid, assemble_covariance,
                       check_psd, cholesky_with_jitter, empirical_cov, sample_paths, simulate)

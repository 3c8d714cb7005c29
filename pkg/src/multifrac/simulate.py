"""Exact Gaussian simulation from covariance matrices on time grids.

Paths are ``L z`` with ``L`` a Cholesky factor of the kernel matrix and
``z`` standard normal.  Grid points at t = 0 carry an identically zero
kernel row, so they are pinned to 0 and left out of the factorization.
"""

from __future__ import annotations

import functools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, eigvalsh, lapack

from .errors import (DomainError, EigenSolverError, FactorizationError,
                     InsufficientPathsError)
from .process import ProcessSpec

DEFAULT_JITTER_SCHEDULE = (0.0, 1e-12, 1e-10, 1e-8, 1e-6)
# n = 4096 intervals plus the pinned t = 0 point
MAX_GRID_POINTS = 4097
# paths are multiplied in fixed blocks so results never depend on worker count
_BLOCK = 256
SUB_SEED_RULE = (
    "path i draws its normals from numpy Philox with 128-bit key "
    "(master_seed mod 2**64) * 2**64 + i, counter 0"
)


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing, non-negative sample times."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).ravel()
        if pts.size == 0:
            raise DomainError("time grid is empty")
        if np.any(~np.isfinite(pts)) or np.any(pts < 0):
            raise DomainError("grid times must be finite and non-negative")
        if np.any(np.diff(pts) <= 0):
            raise DomainError("grid times must be strictly increasing (no duplicates)")
        if pts.size > MAX_GRID_POINTS:
            raise DomainError(f"grid exceeds {MAX_GRID_POINTS} points")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, start, end, n):
        """``n + 1`` equally spaced points from ``start`` to ``end`` inclusive."""
        if n < 1:
            raise DomainError("uniform grid needs n >= 1 intervals")
        return cls(np.linspace(start, end, int(n) + 1))

    @property
    def has_zero(self):
        return bool(self.points[0] == 0.0)

    def __len__(self):
        return self.points.size


@dataclass
class CovarianceMatrix:
    grid: TimeGrid
    entries: np.ndarray
    jitter: float = 0.0

    @functools.cached_property
    def min_eigenvalue(self):
        try:
            return float(eigvalsh(self.entries, subset_by_index=[0, 0])[0])
        except (LinAlgError, ValueError) as exc:
            raise EigenSolverError(
                f"eigensolver failed on {self.entries.shape} matrix "
                f"(condition estimate {_condition(self.entries):.3e}): {exc}"
            ) from exc

    @property
    def trace(self):
        return float(np.trace(self.entries))


def _condition(m):
    try:
        return float(np.linalg.cond(m))
    except LinAlgError:
        return float("inf")


@dataclass(frozen=True)
class PSDReport:
    size: int
    min_eigenvalue: float
    trace: float
    tolerance: float
    threshold: float
    passed: bool

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class Factor:
    """Lower-triangular square root of a kernel matrix (pinned rows are zero)."""

    spec: ProcessSpec | None
    grid: TimeGrid
    lower: np.ndarray
    jitter: float
    pinned: np.ndarray

    @property
    def active(self):
        return ~self.pinned


@dataclass
class PathEnsemble:
    spec: ProcessSpec | None
    grid: TimeGrid
    master_seed: int
    paths: np.ndarray
    jitter: float = 0.0
    sub_seed_rule: str = field(default=SUB_SEED_RULE)

    @property
    def n_paths(self):
        return self.paths.shape[0]


def assemble_covariance(spec, grid):
    """Kernel matrix ``entries[i, j] = cov(t_i, t_j)``, exactly symmetric."""
    if not isinstance(grid, TimeGrid):
        grid = TimeGrid(grid)
    t = grid.points
    m = np.asarray(spec.cov(t[:, None], t[None, :]), dtype=float)
    # symmetrise from the upper triangle so rounding cannot break symmetry
    iu = np.triu_indices_from(m, k=1)
    m.T[iu] = m[iu]
    return CovarianceMatrix(grid, m)


def check_psd(m, tol=1e-10):
    """Pass when ``min_eig >= -tol * max(1, trace / n)``."""
    entries = m.entries if isinstance(m, CovarianceMatrix) else np.asarray(m, dtype=float)
    if not np.array_equal(entries, entries.T):
        raise DomainError("matrix is not symmetric")
    if isinstance(m, CovarianceMatrix):
        lam = m.min_eigenvalue
    else:
        lam = CovarianceMatrix(None, entries).min_eigenvalue
    n = entries.shape[0]
    tr = float(np.trace(entries))
    threshold = -tol * max(1.0, tr / n)
    return PSDReport(n, lam, tr, tol, threshold, lam >= threshold)


def cholesky_with_jitter(m, schedule=DEFAULT_JITTER_SCHEDULE, spec=None):
    """Cholesky factor of ``entries + jitter * I`` over the active (t > 0) block.

    ``schedule`` lists jitters relative to the mean active diagonal; the
    first one that factorizes wins.
    """
    entries = m.entries
    grid = m.grid
    diag = np.diag(entries)
    pinned = diag == 0.0
    if grid is not None:
        pinned |= grid.points == 0.0
    active = np.flatnonzero(~pinned)
    sub = entries[np.ix_(active, active)]
    scale = float(np.mean(np.diag(sub))) if active.size else 0.0
    last_info = None
    for rel in schedule:
        jitter = rel * scale
        a = sub + jitter * np.eye(active.size) if jitter else sub
        c, info = lapack.dpotrf(a, lower=1, clean=1)
        if info == 0:
            lower = np.zeros_like(entries)
            lower[np.ix_(active, active)] = np.tril(c)
            m.jitter = jitter
            return Factor(spec, grid, lower, jitter, pinned)
        last_info = info
    raise FactorizationError(
        f"Cholesky failed up to jitter {schedule[-1]:g} x mean diagonal; "
        f"leading minor {last_info} not positive",
        last_pivot=last_info,
        last_jitter=schedule[-1] * scale,
    )


def _normals(master_seed, index, n):
    key = (int(master_seed) % 2**64) * 2**64 + int(index)
    return np.random.Generator(np.random.Philox(key=key)).standard_normal(n)


def _block(lower_active, master_seed, start, stop):
    z = np.stack([_normals(master_seed, i, lower_active.shape[0]) for i in range(start, stop)])
    return z @ lower_active.T


def sample_paths(factor, n_paths, master_seed, workers=1):
    """Draw ``n_paths`` exact sample paths.

    Path ``i`` depends only on ``(master_seed, i)`` and the factor; blocks
    of paths may be spread over ``workers`` threads without changing a bit.
    """
    n_paths = int(n_paths)
    if n_paths < 0:
        raise DomainError("n_paths must be non-negative")
    active = factor.active
    la = factor.lower[np.ix_(active, active)]
    paths = np.zeros((n_paths, factor.lower.shape[0]))
    starts = list(range(0, n_paths, _BLOCK))

    def run(start):
        stop = min(start + _BLOCK, n_paths)
        return start, stop, _block(la, master_seed, start, stop)

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(s) for s in starts]
    for start, stop, block in results:
        paths[start:stop, active] = block
    return PathEnsemble(factor.spec, factor.grid, int(master_seed), paths, factor.jitter)


def simulate(spec, grid, n_paths, master_seed, workers=1, schedule=DEFAULT_JITTER_SCHEDULE):
    """Assemble, factor and sample in one call."""
    if not isinstance(grid, TimeGrid):
        grid = TimeGrid(grid)
    m = assemble_covariance(spec, grid)
    return sample_paths(cholesky_with_jitter(m, schedule, spec=spec), n_paths, master_seed, workers)


def empirical_cov(e):
    """Unbiased sample covariance across paths and its standard errors.

    For Gaussian data the sampling variance of a covariance entry is
    ``(S_ij**2 + S_ii S_jj) / (n - 1)`` (Isserlis); on the diagonal this is
    ``(E|Y|^4 / var^2 - 1) var^2 / (n - 1)`` with the Gaussian ratio 3.
    """
    paths = e.paths if isinstance(e, PathEnsemble) else np.asarray(e, dtype=float)
    n = paths.shape[0]
    if n < 2:
        raise InsufficientPathsError("empirical covariance needs at least 2 paths")
    centred = paths - paths.mean(axis=0)
    s = centred.T @ centred / (n - 1)
    s = 0.5 * (s + s.T)
    d = np.diag(s)
    se = np.sqrt((s**2 + np.outer(d, d)) / (n - 1))
    grid = e.grid if isinstance(e, PathEnsemble) else None
    return CovarianceMatrix(grid, s), se


def kernel_standard_errors(entries, n_paths):
    """Standard errors of sample covariances around a known kernel matrix."""
    d = np.diag(entries)
    return np.sqrt((entries**2 + np.outer(d, d)) / (n_paths - 1))

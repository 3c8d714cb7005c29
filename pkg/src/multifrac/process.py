"""Process selection: which kernel, with which parameters."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import mpmath

from . import kernels
from .errors import DomainError
from .hurst import HurstFunction


class Family(str, enum.Enum):
    FBM = "fbm"
    BFBM = "bfbm"
    MBM = "mbm"
    EXT = "ext"
    XK = "xk"


@dataclass(frozen=True)
class ProcessSpec:
    """A centred Gaussian process identified by its covariance kernel.

    Prefer the constructors :meth:`fbm`, :meth:`bfbm`, :meth:`mbm`,
    :meth:`ext` and :meth:`xk`; they fill in the implied parameters
    (K = 1 for fBm and mBm).
    """

    family: Family
    H: float | None = None
    K: float = 1.0
    hurst_fn: HurstFunction | None = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        f = self.family
        if f in (Family.FBM, Family.BFBM):
            if self.H is None or not 0 < self.H < 1:
                raise DomainError(f"{f.value} requires H in (0, 1)")
            if self.hurst_fn is not None:
                raise DomainError(f"{f.value} takes a constant H, not a Hurst function")
        if f in (Family.MBM, Family.EXT) and self.hurst_fn is None:
            raise DomainError(f"{f.value} requires a Hurst function")
        if f in (Family.FBM, Family.MBM) and self.K != 1.0:
            raise DomainError(f"{f.value} implies K = 1")
        if f is Family.XK:
            if not 0 < self.K < 1:
                raise DomainError("xk requires K in (0, 1)")
        elif not 0 < self.K <= 1:
            raise DomainError("K must lie in (0, 1]")

    @classmethod
    def fbm(cls, H):
        return cls(Family.FBM, H=float(H))

    @classmethod
    def bfbm(cls, H, K):
        return cls(Family.BFBM, H=float(H), K=float(K))

    @classmethod
    def mbm(cls, hurst_fn):
        return cls(Family.MBM, hurst_fn=hurst_fn)

    @classmethod
    def ext(cls, hurst_fn, K):
        return cls(Family.EXT, K=float(K), hurst_fn=hurst_fn)

    @classmethod
    def xk(cls, K):
        return cls(Family.XK, K=float(K))

    def cov(self, t, s):
        """Kernel evaluated at (t, s); broadcasts over arrays."""
        f = self.family
        if f is Family.FBM:
            return kernels.cov_fbm(t, s, self.H)
        if f is Family.BFBM:
            return kernels.cov_bfbm(t, s, self.H, self.K)
        if f is Family.MBM:
            return kernels.cov_mbm(t, s, self.hurst_fn)
        if f is Family.EXT:
            return kernels.cov_ext(t, s, self.hurst_fn, self.K)
        return kernels.cov_xk(t, s, self.K)

    def hurst_mp(self, t):
        if self.hurst_fn is not None:
            return self.hurst_fn.mp(t)
        return mpmath.mpf(self.H)

    def cov_mp(self, t, s):
        """Kernel at the ambient mpmath precision (scalars only)."""
        if self.family is Family.XK:
            return kernels.cov_xk_mp(t, s, self.K)
        return kernels.cov_ext_mp(t, s, self.hurst_mp(t), self.hurst_mp(s), self.K)

    def hurst_at(self, t):
        """Hurst value H(t) (constant families return H)."""
        if self.hurst_fn is not None:
            return self.hurst_fn(t)
        return self.H

    @property
    def as_bfbm(self):
        """Equivalent (H, K) if the process has constant regularity, else None."""
        if self.family in (Family.FBM, Family.BFBM):
            return self.H, self.K
        if self.hurst_fn is not None and self.hurst_fn.is_constant:
            return self.hurst_fn.range_lo, self.K
        return None

    def to_dict(self):
        out = {"family": self.family.value, "K": self.K}
        if self.H is not None:
            out["H"] = self.H
        if self.hurst_fn is not None:
            out["hurst"] = self.hurst_fn.to_string()
        return out

    @classmethod
    def from_dict(cls, d):
        hf = HurstFunction.from_string(d["hurst"]) if d.get("hurst") else None
        return cls(Family(d["family"]), H=d.get("H"), K=float(d.get("K", 1.0)), hurst_fn=hf)

    def describe(self):
        f = self.family.value
        if self.family is Family.XK:
            return f"xk(K={self.K})"
        if self.hurst_fn is None:
            return f"{f}(H={self.H}, K={self.K})"
        return f"{f}({self.hurst_fn.to_string() if self.hurst_fn.kind != 'tabulated' else 'tabulated'}, K={self.K})"

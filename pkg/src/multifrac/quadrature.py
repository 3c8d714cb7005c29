"""Thin wrappers over QUADPACK for half-line integrals with endpoint singularities."""

import warnings

import numpy as np
from scipy import integrate

from .errors import QuadratureError


def panel(f, a, b, *, alg=None, epsabs=1e-10, epsrel=1e-12, limit=400):
    """Integrate ``f`` on ``[a, b]``, optionally against ``(x - a)**alg``.

    Raises QuadratureError when QUADPACK flags non-convergence.
    """
    kwargs = dict(epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1)
    if alg is not None:
        kwargs.update(weight="alg", wvar=(alg, 0.0))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, **kwargs)
    value, abserr = out[0], out[1]
    ier_msg = out[3] if len(out) > 3 else None
    if not np.isfinite(value) or (ier_msg and abserr > max(epsabs, epsrel * abs(value))):
        raise QuadratureError(f"quadrature on [{a}, {b}] did not converge", abserr)
    return value, abserr


def half_line(head, tail, *, head_alg=None, tail_alg=None, **kw):
    """Integrate over ``[0, inf)`` split at x = 1.

    ``head`` is integrated on ``[0, 1]`` directly.  ``tail`` must already be
    the transformed integrand after ``x -> 1/u`` (Jacobian included), and is
    also integrated on ``[0, 1]``.  Returns ``(value, abserr)``.
    """
    v1, e1 = panel(head, 0.0, 1.0, alg=head_alg, **kw)
    v2, e2 = panel(tail, 0.0, 1.0, alg=tail_alg, **kw)
    return v1 + v2, e1 + e2

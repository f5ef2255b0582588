"""Complete elliptic integrals by adaptive Simpson quadrature.

K and E are computed from their defining integrals over [0, pi/2], with the
modulus k (not the parameter m = k^2). The refinement runs breadth first over
all (k, subinterval) pairs at once, so whole grids of moduli are integrated
in a few vectorized passes.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import NumericalError, ValidationError

HALF_PI = math.pi / 2
DEFAULT_TOL = 1e-10
MAX_DEPTH = 50


def adaptive_simpson(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    params,
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    initial_panels: int = 8,
) -> np.ndarray:
    """Integrate ``f(x, p)`` over [a, b] for every parameter in ``params``.

    Each panel is accepted once the two-half Simpson estimate differs from the
    whole-panel estimate by at most 15 times its share of ``tol``; the
    accepted value carries the usual Richardson correction.
    """
    params = np.atleast_1d(np.asarray(params, dtype=float))
    npar = params.size
    edges = np.linspace(a, b, initial_panels + 1)
    owner = np.repeat(np.arange(npar), initial_panels)
    lo = np.tile(edges[:-1], npar)
    hi = np.tile(edges[1:], npar)
    p = params[owner]
    flo, fhi = f(lo, p), f(hi, p)
    mid = 0.5 * (lo + hi)
    fmid = f(mid, p)
    whole = (hi - lo) / 6 * (flo + 4 * fmid + fhi)
    eps = np.full(lo.size, tol / initial_panels)
    depth = np.zeros(lo.size, dtype=int)
    total = np.zeros(npar)

    while owner.size:
        p = params[owner]
        lmid = 0.5 * (lo + mid)
        rmid = 0.5 * (mid + hi)
        flm, frm = f(lmid, p), f(rmid, p)
        h = (hi - lo) / 12
        left = h * (flo + 4 * flm + fmid)
        right = h * (fmid + 4 * frm + fhi)
        delta = left + right - whole
        done = np.abs(delta) <= 15 * eps
        if np.any(depth >= MAX_DEPTH):
            raise NumericalError("adaptive quadrature did not converge")
        np.add.at(total, owner[done], (left + right + delta / 15)[done])
        keep = ~done
        owner = np.concatenate([owner[keep], owner[keep]])
        lo, mid, hi = (
            np.concatenate([lo[keep], mid[keep]]),
            np.concatenate([lmid[keep], rmid[keep]]),
            np.concatenate([mid[keep], hi[keep]]),
        )
        flo, fmid, fhi = (
            np.concatenate([flo[keep], fmid[keep]]),
            np.concatenate([flm[keep], frm[keep]]),
            np.concatenate([fmid[keep], fhi[keep]]),
        )
        whole = np.concatenate([left[keep], right[keep]])
        eps = np.concatenate([eps[keep], eps[keep]]) / 2
        depth = np.concatenate([depth[keep], depth[keep]]) + 1
    return total


def _e_integrand(theta, k):
    return np.sqrt(1 - (k * np.sin(theta)) ** 2)


def _k_integrand(theta, k):
    return 1 / np.sqrt(1 - (k * np.sin(theta)) ** 2)


def _k_scaled_integrand(theta, k):
    # sqrt((1 - k^2)/(1 - k^2 sin^2)); identically 0 at k = 1 except at pi/2
    q = 1 - k * k
    den = 1 - (k * np.sin(theta)) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.sqrt(q / den)
    return np.where(q == 0, 0.0, out)


def _moduli(k, allow_one: bool) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    upper_ok = k <= 1 if allow_one else k < 1
    if not np.all((k >= 0) & upper_ok):
        raise ValidationError("modulus k outside [0, 1]" if allow_one else "modulus k outside [0, 1)")
    return k


def _as_output(values: np.ndarray, k):
    return float(values[0]) if np.ndim(k) == 0 else values


def complete_elliptic_E(k, tol: float = DEFAULT_TOL):
    """E(k) = int_0^{pi/2} sqrt(1 - k^2 sin^2 t) dt, for 0 <= k <= 1."""
    kk = _moduli(k, allow_one=True)
    return _as_output(adaptive_simpson(_e_integrand, kk.ravel(), 0.0, HALF_PI, tol), k)


def complete_elliptic_K(k, tol: float = DEFAULT_TOL):
    """K(k) = int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t), for 0 <= k < 1."""
    kk = _moduli(k, allow_one=False)
    return _as_output(adaptive_simpson(_k_integrand, kk.ravel(), 0.0, HALF_PI, tol), k)


def scaled_elliptic_K(k, tol: float = DEFAULT_TOL):
    """K(k) sqrt(1 - k^2), integrated directly; bounded on [0, 1] with value 0 at 1."""
    kk = _moduli(k, allow_one=True)
    return _as_output(adaptive_simpson(_k_scaled_integrand, kk.ravel(), 0.0, HALF_PI, tol), k)


def elliptic_length(k, tol: float = DEFAULT_TOL):
    """8 / (sqrt2 sqrt(1 + k^2)) * (E - K (1 - k^2) / 2).

    Lower bound for lengths of type-A geodesics homotopic to type-C ones.
    Written with K sqrt(1 - k^2) so the k -> 1 limit (value 4) is attained.
    """
    kk = _moduli(k, allow_one=True).ravel()
    E = adaptive_simpson(_e_integrand, kk, 0.0, HALF_PI, tol)
    Ks = adaptive_simpson(_k_scaled_integrand, kk, 0.0, HALF_PI, tol)
    val = 8 / (math.sqrt(2) * np.sqrt(1 + kk**2)) * (E - 0.5 * np.sqrt(1 - kk**2) * Ks)
    return _as_output(val, k)

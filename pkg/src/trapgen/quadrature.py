"""Adaptive Gauss-Kronrod (7/15) quadrature.

Intervals are refined in batches so the integrand is always called with a
flat array of abscissae, which keeps Bessel-function integrands vectorized.
"""
from __future__ import annotations

import numpy as np

from .errors import NumericalFailure

_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point rule on [-1, 1]; Gauss points are the odd-indexed Kronrod nodes
NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD = np.concatenate([_WK[:-1], _WK[::-1]])
GAUSS = np.zeros(15)
GAUSS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def _rule(f, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel())).reshape(x.shape)
    k = half * (fx @ KRONROD)
    g = half * (fx @ GAUSS)
    return k, np.abs(k - g)


def gauss_kronrod(f, a: float, b: float, epsabs: float = 1e-10, epsrel: float = 0.0,
                  max_intervals: int = 20000, initial: int = 1):
    """Integrate ``f`` over ``[a, b]``.

    ``f`` must accept a 1D array and return values of the same length (real or
    complex). Returns ``(value, error_estimate)``. Raises
    :class:`NumericalFailure` if the interval budget runs out first.
    """
    if a == b:
        return 0.0, 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    edges = np.linspace(a, b, initial + 1)
    lo, hi = edges[:-1], edges[1:]
    done_val = 0.0
    done_err = 0.0
    length = b - a
    while True:
        val, err = _rule(f, lo, hi)
        total = done_val + val.sum()
        tol = max(epsabs, epsrel * abs(total))
        # an interval is settled once its error is within its share of the tolerance
        ok = err <= tol * (hi - lo) / length
        done_val += val[ok].sum()
        done_err += err[ok].sum()
        if ok.all():
            return sign * done_val, done_err
        lo, hi = lo[~ok], hi[~ok]
        if 2 * lo.size > max_intervals:
            raise NumericalFailure(
                f"quadrature did not converge on [{a}, {b}]: "
                f"{lo.size} unsettled intervals, residual error {err[~ok].sum():.3e}")
        mid = 0.5 * (lo + hi)
        if np.any(mid <= lo) or np.any(mid >= hi):
            raise NumericalFailure(f"quadrature interval underflow on [{a}, {b}]")
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])

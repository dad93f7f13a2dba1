"""Pure-Python implementations of the hot kernels.

Same signatures and algorithm as the compiled ``_ckernels`` module; used
when the extension is not built. Quadrature kernels return
``(value, error_estimate, converged)``.
"""
import math

import numpy as np

from .quadrature import adaptive_gauss_legendre, oscillation_panels

NAME = "python"


def _osc(f, omega, a, b, tol, max_depth):
    res = adaptive_gauss_legendre(
        f, a, b, tol=tol, max_depth=max_depth, panels=oscillation_panels(omega, a, b),
        phase_scale=abs(omega),
    )
    return res.value, res.error, res.converged


def power_cos_integral(p, omega, a, b, tol, max_depth):
    """Integral of (1 - |2x|^p) cos(omega x) over [a, b]."""
    return _osc(lambda x: (1.0 - np.abs(2.0 * x) ** p) * np.cos(omega * x), omega, a, b, tol, max_depth)


def xpow_cos_integral(q, omega, a, b, tol, max_depth):
    """Integral of |x|^q cos(omega x) over [a, b]."""
    return _osc(lambda x: np.abs(x) ** q * np.cos(omega * x), omega, a, b, tol, max_depth)


def xpow_sin_integral(q, omega, a, b, tol, max_depth):
    """Integral of |x|^q sin(omega x) over [a, b]."""
    return _osc(lambda x: np.abs(x) ** q * np.sin(omega * x), omega, a, b, tol, max_depth)


def hyp1f2_series(a, b1, b2, x, max_terms):
    """Double-precision partial sum of 1F2(a; b1, b2; x).

    Returns (sum, tail_bound, rounding_bound, terms_used, converged).
    """
    eps = 2.0 ** -53
    term = 1.0
    total = 1.0
    abs_total = 1.0
    if x == 0.0:
        return 1.0, 0.0, 0.0, 1, True
    # term ratios are monotone decreasing in magnitude from here on
    n_mono = int(math.ceil(2.0 * max(abs(a), abs(b1), abs(b2), 1.0)))
    n = 0
    while n < max_terms:
        ratio = (a + n) * x / ((b1 + n) * (b2 + n) * (n + 1.0))
        nxt = term * ratio
        m = n + 1
        r_bound = abs(x) * (abs(a) + m) / (abs((b1 + m) * (b2 + m)) * (m + 1.0))
        if n >= n_mono and r_bound < 1.0 and (abs(nxt) < 1e-16 * abs(total) or nxt == 0.0):
            tail = abs(nxt) / (1.0 - r_bound)
            rounding = (6.0 * (n + 1) + 10.0) * eps * abs_total
            return total, tail, rounding, n + 1, True
        term = nxt
        total += term
        abs_total += abs(term)
        n += 1
    rounding = (6.0 * (n + 1) + 10.0) * eps * abs_total
    return total, math.inf, rounding, n + 1, False

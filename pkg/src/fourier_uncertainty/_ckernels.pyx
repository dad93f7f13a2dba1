# cython: language_level=3
"""Compiled hot kernels: oscillatory adaptive Gauss-Legendre and the 1F2 recurrence.

Mirrors ``_pykernels`` call for call.
"""
from libc.math cimport cos, sin, fabs, fmax, pow, ceil, INFINITY
from libc.stdlib cimport malloc, free

import numpy as np

NAME = "cython"

cdef enum:
    ORDER = 8
    STACK = 4096

cdef double TWO_PI = 6.283185307179586

cdef double NODES[ORDER]
cdef double WEIGHTS[ORDER]

_n, _w = np.polynomial.legendre.leggauss(ORDER)
for _i in range(ORDER):
    NODES[_i] = _n[_i]
    WEIGHTS[_i] = _w[_i]


cdef inline double _integrand(int kind, double p, double omega, double x) nogil:
    if kind == 0:
        return (1.0 - pow(fabs(2.0 * x), p)) * cos(omega * x)
    elif kind == 1:
        return pow(fabs(x), p) * cos(omega * x)
    return pow(fabs(x), p) * sin(omega * x)


cdef double EPS = 2.220446049250313e-16
cdef double ROUNDOFF_FACTOR = 16.0


cdef inline double _gl(int kind, double p, double omega, double lo, double hi,
                       double *absval) nogil:
    cdef double mid = 0.5 * (lo + hi)
    cdef double half = 0.5 * (hi - lo)
    cdef double acc = 0.0, aacc = 0.0, fx
    cdef int i
    for i in range(ORDER):
        fx = _integrand(kind, p, omega, mid + half * NODES[i])
        acc += WEIGHTS[i] * fx
        aacc += WEIGHTS[i] * fabs(fx)
    absval[0] = half * aacc
    return half * acc


cdef int _adaptive(int kind, double p, double omega, double a, double b,
                   double tol, int max_depth, double *value, double *err) nogil:
    cdef double width = b - a
    cdef long n0, j
    cdef double periods = fabs(omega) * width / TWO_PI
    n0 = <long>ceil(8.0 * periods)
    if n0 < 1:
        n0 = 1
    cdef double *lo_s = <double *>malloc(STACK * sizeof(double))
    cdef double *hi_s = <double *>malloc(STACK * sizeof(double))
    cdef double *wh_s = <double *>malloc(STACK * sizeof(double))
    cdef int *dp_s = <int *>malloc(STACK * sizeof(int))
    cdef int top, depth, capped = 0
    cdef double lo, hi, mid, whole, left, right, refined, diff, budget, aleft, aright, floor_
    cdef double total = 0.0, errsum = 0.0
    cdef double step = width / n0
    for j in range(n0):
        lo = a + j * step
        hi = b if j == n0 - 1 else a + (j + 1) * step
        top = 0
        lo_s[0] = lo
        hi_s[0] = hi
        wh_s[0] = _gl(kind, p, omega, lo, hi, &aleft)
        dp_s[0] = 0
        top = 1
        while top > 0:
            top -= 1
            lo = lo_s[top]
            hi = hi_s[top]
            whole = wh_s[top]
            depth = dp_s[top]
            mid = 0.5 * (lo + hi)
            left = _gl(kind, p, omega, lo, mid, &aleft)
            right = _gl(kind, p, omega, mid, hi, &aright)
            refined = left + right
            diff = fabs(refined - whole)
            budget = tol * (hi - lo) / width
            floor_ = ROUNDOFF_FACTOR * EPS * (1.0 + fabs(omega) * fmax(fabs(lo), fabs(hi))) * (aleft + aright)
            if floor_ > budget:
                budget = floor_
            if diff <= budget or depth >= max_depth or top + 2 > STACK:
                if diff > budget:
                    capped = 1
                total += refined
                errsum += diff
            else:
                lo_s[top] = mid
                hi_s[top] = hi
                wh_s[top] = right
                dp_s[top] = depth + 1
                lo_s[top + 1] = lo
                hi_s[top + 1] = mid
                wh_s[top + 1] = left
                dp_s[top + 1] = depth + 1
                top += 2
    free(lo_s)
    free(hi_s)
    free(wh_s)
    free(dp_s)
    value[0] = total
    err[0] = errsum
    # depth-capped panels are acceptable if the summed estimate still meets tol
    return 1 if (capped == 0 or errsum <= tol) else 0


def _run(int kind, double p, double omega, double a, double b, double tol, int max_depth):
    cdef double value = 0.0, err = 0.0, sign = 1.0
    cdef int ok
    if a == b:
        return 0.0, 0.0, True
    if b < a:
        a, b = b, a
        sign = -1.0
    with nogil:
        ok = _adaptive(kind, p, omega, a, b, tol, max_depth, &value, &err)
    return sign * value, err, bool(ok)


def power_cos_integral(double p, double omega, double a, double b, double tol, int max_depth):
    """Integral of (1 - |2x|^p) cos(omega x) over [a, b]."""
    return _run(0, p, omega, a, b, tol, max_depth)


def xpow_cos_integral(double q, double omega, double a, double b, double tol, int max_depth):
    """Integral of |x|^q cos(omega x) over [a, b]."""
    return _run(1, q, omega, a, b, tol, max_depth)


def xpow_sin_integral(double q, double omega, double a, double b, double tol, int max_depth):
    """Integral of |x|^q sin(omega x) over [a, b]."""
    return _run(2, q, omega, a, b, tol, max_depth)


def hyp1f2_series(double a, double b1, double b2, double x, long max_terms):
    """Double-precision partial sum of 1F2(a; b1, b2; x).

    Returns (sum, tail_bound, rounding_bound, terms_used, converged).
    """
    cdef double eps = 1.1102230246251565e-16
    cdef double term = 1.0, total = 1.0, abs_total = 1.0
    cdef double ratio, nxt, r_bound, m
    cdef long n = 0, n_mono
    cdef double big
    if x == 0.0:
        return 1.0, 0.0, 0.0, 1, True
    big = fabs(a)
    if fabs(b1) > big:
        big = fabs(b1)
    if fabs(b2) > big:
        big = fabs(b2)
    if big < 1.0:
        big = 1.0
    n_mono = <long>ceil(2.0 * big)
    with nogil:
        while n < max_terms:
            ratio = (a + n) * x / ((b1 + n) * (b2 + n) * (n + 1.0))
            nxt = term * ratio
            m = n + 1.0
            r_bound = fabs(x) * (fabs(a) + m) / (fabs((b1 + m) * (b2 + m)) * (m + 1.0))
            if n >= n_mono and r_bound < 1.0 and (fabs(nxt) < 1e-16 * fabs(total) or nxt == 0.0):
                break
            term = nxt
            total += term
            abs_total += fabs(term)
            n += 1
    if n < max_terms:
        return (total, fabs(nxt) / (1.0 - r_bound),
                (6.0 * (n + 1) + 10.0) * eps * abs_total, n + 1, True)
    return total, INFINITY, (6.0 * (n + 1) + 10.0) * eps * abs_total, n + 1, False

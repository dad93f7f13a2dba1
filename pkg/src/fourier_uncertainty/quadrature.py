"""Adaptive Gauss-Legendre quadrature and bracketed maximisation.

Everything here is vectorised over numpy arrays: the integrand is called
with a 1-D array of abscissae and must return an array of the same shape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

GL_ORDER = 8
DEFAULT_TOL = 1e-12
MAX_DEPTH = 40

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)


class QuadratureError(RuntimeError):
    """Raised when adaptive bisection hits the depth limit.

    ``achieved`` carries the error estimate that was reached.
    """

    def __init__(self, message: str, achieved: float, value: float):
        super().__init__(f"{message} (achieved error estimate {achieved:.3e})")
        self.achieved = achieved
        self.value = value


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    converged: bool
    evaluations: int


def oscillation_panels(omega: float, a: float, b: float, per_period: int = 8) -> int:
    """Number of initial panels so each period of cos(omega*x) gets ``per_period``."""
    periods = abs(omega) * abs(b - a) / (2.0 * math.pi)
    return max(1, int(math.ceil(per_period * periods)))


_EPS = np.finfo(float).eps
ROUNDOFF_FACTOR = 16.0


def _gl(f, lo, hi):
    """GL estimate per panel and the matching integral of |f| (for the roundoff floor)."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    return half * (fx @ _WEIGHTS), half * (np.abs(fx) @ _WEIGHTS)


def adaptive_gauss_legendre(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    max_depth: int = MAX_DEPTH,
    panels: int = 1,
    breakpoints: Sequence[float] = (),
    phase_scale: float = 0.0,
) -> QuadResult:
    """Integrate ``f`` over [a, b] by adaptive bisection.

    Each panel's GL estimate is compared with the sum over its two halves; a
    panel is accepted once the difference is below its share of ``tol``
    (proportional to its width), or once the difference is at the level of
    floating-point roundoff in the panel sum. Panels are processed level by
    level so the integrand sees large batches.

    ``phase_scale`` is the |omega| of an oscillatory factor cos(omega x); its
    argument carries a relative rounding error that grows with |omega x|, and
    the roundoff floor is widened to match.
    """
    if b == a:
        return QuadResult(0.0, 0.0, True, 0)
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    cuts = sorted({a, b, *[p for p in breakpoints if a < p < b]})
    edges = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        n = max(1, int(math.ceil(panels * (hi - lo) / (b - a))))
        edges.append(np.linspace(lo, hi, n + 1))
    grid = np.concatenate([e[:-1] for e in edges])
    upper = np.concatenate([e[1:] for e in edges])

    width = b - a
    total = 0.0
    err = 0.0
    evals = 0
    capped = False
    lo, hi = grid, upper
    whole, _ = _gl(f, lo, hi)
    evals += lo.size * GL_ORDER
    for depth in range(max_depth + 1):
        mid = 0.5 * (lo + hi)
        left, aleft = _gl(f, lo, mid)
        right, aright = _gl(f, mid, hi)
        evals += 2 * lo.size * GL_ORDER
        refined = left + right
        diff = np.abs(refined - whole)
        phase = 1.0 + phase_scale * np.maximum(np.abs(lo), np.abs(hi))
        budget = np.maximum(tol * (hi - lo) / width, ROUNDOFF_FACTOR * _EPS * phase * (aleft + aright))
        ok = diff <= budget
        if depth == max_depth:
            ok[:] = True
            capped = bool(np.any(diff > budget))
        total += float(np.sum(refined[ok]))
        err += float(np.sum(diff[ok]))
        if np.all(ok):
            break
        keep = ~ok
        lo = np.concatenate([lo[keep], mid[keep]])
        hi = np.concatenate([mid[keep], hi[keep]])
        whole = np.concatenate([left[keep], right[keep]])
    # panels cut off at max_depth are acceptable if the summed estimate still meets tol
    converged = not capped or err <= tol
    return QuadResult(sign * total, err, converged, evals)


def integrate(f, a, b, tol=DEFAULT_TOL, max_depth=MAX_DEPTH, panels=1, breakpoints=()) -> float:
    """Like :func:`adaptive_gauss_legendre` but returns the value or raises."""
    res = adaptive_gauss_legendre(f, a, b, tol, max_depth, panels, breakpoints)
    if not res.converged:
        raise QuadratureError(f"quadrature on [{a}, {b}] did not converge", res.error, res.value)
    return res.value


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_maximize(f, lo, hi, rtol: float = 1e-10, max_iter: int = 200):
    """Vectorised golden-section search for the maximum of ``f`` on each bracket.

    ``lo`` and ``hi`` are arrays of bracket ends; ``f`` maps an array of
    points to values. Returns (argmax, max) arrays. Stops once every bracket
    is narrower than ``rtol * max(|x|, 1)``.
    """
    a = np.array(lo, dtype=float, copy=True)
    b = np.array(hi, dtype=float, copy=True)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = f(c)
    fd = f(d)
    for _ in range(max_iter):
        if np.all(b - a <= rtol * np.maximum(np.abs(b), 1.0)):
            break
        left = fc >= fd
        # maximum in [a, d] where fc >= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - _INVPHI * (b - a)
        new_d = a + _INVPHI * (b - a)
        probe = np.where(left, new_c, new_d)
        fp = f(probe)
        c_old, fc_old, d_old, fd_old = c, fc, d, fd
        c = np.where(left, new_c, d_old)
        fc = np.where(left, fp, fd_old)
        d = np.where(left, c_old, new_d)
        fd = np.where(left, fc_old, fp)
    x = np.where(fc >= fd, c, d)
    return x, np.maximum(fc, fd)

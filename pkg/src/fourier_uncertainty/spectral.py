"""Fourier transforms of even kernels and the weighted sup-norm of xi^beta * u_hat.

Convention: u_hat(xi) = integral of u(x) exp(-2 pi i xi x) dx, so the
characteristic function of [-1/2, 1/2] has u_hat(xi) = sin(pi xi) / (pi xi).
For even kernels the transform is the real cosine transform.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np

from . import _backend
from .kernel import KernelSpec, evaluate, total_variation
from .quadrature import (
    DEFAULT_TOL,
    MAX_DEPTH,
    QuadratureError,
    adaptive_gauss_legendre,
    golden_maximize,
    oscillation_panels,
)

POINTS_PER_UNIT = 64
REFINE_RTOL = 1e-10
CERT_RTOL = 1e-9
TIE_RTOL = 1e-12
MAX_CUTOFF_DOUBLINGS = 6

CERTIFIED = "certified"
UNCERTIFIED = "uncertified"
UNBOUNDED_RISK = "unbounded-risk"


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class SupNormResult:
    value: float
    argmax_xi: float
    search_cutoff: float
    tail_bound: float
    grid_points: int
    beta: float
    status: str

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def to_dict(self) -> dict:
        d = asdict(self)
        d["certified"] = self.certified
        return d


# Transforms ---------------------------------------------------------------

def _hat_power2(s):
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    small = np.abs(s) < 0.05
    big = ~small
    sb = s[big]
    out[big] = (2 * np.sin(np.pi * sb) - 2 * np.pi * sb * np.cos(np.pi * sb)) / (np.pi**3 * sb**3)
    # Taylor series avoids cancellation near 0
    z = (np.pi * s[small]) ** 2
    acc = np.zeros_like(z)
    term = np.ones_like(z)
    for n in range(12):
        acc += term * 2.0 / ((2 * n + 1) * (2 * n + 3))
        term = -term * z / ((2 * n + 1) * (2 * n + 2))
    out[small] = acc
    return out


def _hat_power_quad(p: float, s) -> np.ndarray:
    s = np.atleast_1d(np.asarray(s, dtype=float))
    out = np.empty_like(s)
    for i, si in enumerate(s.ravel()):
        val, err, ok = _backend.power_cos_integral(p, 2 * math.pi * si, 0.0, 0.5, 0.5 * DEFAULT_TOL, MAX_DEPTH)
        if not ok:
            raise QuadratureError(f"power-kernel transform at xi={si} did not converge", err, val)
        out.flat[i] = 2.0 * val
    return out


def fourier(kernel: KernelSpec, xi):
    """u_hat(xi) for an even kernel (scalar or array ``xi``)."""
    x = np.asarray(xi, dtype=float)
    fam = kernel.family
    A = kernel.amplitude
    if fam == "gaussian":
        w = kernel.width
        out = A * w * np.exp(-math.pi * (w * x) ** 2)
    elif fam == "characteristic":
        L = 2 * kernel.support_radius
        out = A * L * np.sinc(L * x)
    elif fam == "power":
        L = 2 * kernel.support_radius
        s = L * np.atleast_1d(x)
        if kernel.exponent == 2.0:
            h = _hat_power2(s)
        else:
            h = _hat_power_quad(kernel.exponent, s)
        out = (A * L * h).reshape(x.shape)
    elif fam == "cosine_series":
        R = kernel.support_radius
        m = np.arange(len(kernel.params), dtype=float)
        s = np.multiply.outer(2 * R * x, np.ones_like(m))
        out = R * ((np.sinc(m - s) + np.sinc(m + s)) @ kernel.coefficients)
    else:
        vals = kernel.coefficients
        grid = np.linspace(0.0, kernel.support_radius, vals.size)
        flat = np.atleast_1d(x).ravel()
        out = np.empty_like(flat)
        for i0 in range(0, flat.size, 256):
            chunk = flat[i0:i0 + 256]
            c = np.cos(2 * np.pi * np.multiply.outer(chunk, grid))
            out[i0:i0 + 256] = 2.0 * np.trapezoid(c * vals, grid, axis=1)
        out = out.reshape(x.shape)
    return float(out) if np.ndim(out) == 0 else out


def _dsinc(y):
    y = np.asarray(y, dtype=float)
    safe = np.where(y == 0.0, 1.0, y)
    return np.where(y == 0.0, 0.0, (np.cos(np.pi * y) - np.sinc(y)) / safe)


def fourier_derivative(kernel: KernelSpec, xi):
    """d/dxi of u_hat for the closed-form families; None otherwise."""
    x = np.asarray(xi, dtype=float)
    fam = kernel.family
    A = kernel.amplitude
    if fam == "gaussian":
        return -2 * math.pi * kernel.width**2 * x * fourier(kernel, x)
    L = 2 * kernel.support_radius
    if fam == "characteristic":
        return A * L * L * _dsinc(L * x)
    if fam == "power" and kernel.exponent == 2.0:
        s = np.atleast_1d(L * x)
        safe = np.where(s == 0.0, 1.0, s)
        dh = np.where(
            s == 0.0, 0.0,
            2 * np.sin(np.pi * safe) / (np.pi * safe**2) - 3 * _hat_power2(safe) / safe,
        )
        return (A * L * L * dh).reshape(x.shape)
    if fam == "cosine_series":
        m = np.arange(len(kernel.params), dtype=float)
        s = np.multiply.outer(L * x, np.ones_like(m))
        return 0.5 * L * L * ((_dsinc(m + s) - _dsinc(m - s)) @ kernel.coefficients)
    return None


def _polish(kernel: KernelSpec, beta: float, x: float) -> float:
    """Root of d/dxi [xi^beta u_hat] near a golden-section estimate."""
    from scipy.optimize import brentq

    def dw(t):
        return beta * fourier(kernel, t) + t * fourier_derivative(kernel, t)

    if x <= 0:
        return x
    d = 1e-6 * max(1.0, x)
    lo, hi = x - d, x + d
    flo, fhi = dw(lo), dw(hi)
    if lo <= 0 or not (flo * fhi < 0):
        return x
    return brentq(dw, lo, hi, xtol=1e-15, rtol=1e-15)


def _closed_form(kernel: KernelSpec) -> bool:
    return kernel.family in ("characteristic", "gaussian", "cosine_series") or (
        kernel.family == "power" and kernel.exponent == 2.0
    )


# Tail certificates --------------------------------------------------------

def _cos_series_G(coeffs, L, t):
    m = np.arange(coeffs.size, dtype=float)
    signs = np.where(m % 2 == 0, 1.0, -1.0)
    return (1.0 / (1.0 - np.multiply.outer(t, m**2) / L**2)) @ (coeffs * signs)


def _cos_series_tail(kernel: KernelSpec, beta: float, cutoff: float):
    """(tail_bound, limit_candidate, status) for xi >= cutoff.

    xi * u_hat(xi) = sin(pi L xi) G(xi) / pi with G a rational function of
    t = 1/xi^2; G is bounded on [0, 1/cutoff^2] via a grid plus a
    second-derivative slack.
    """
    c = kernel.coefficients
    L = 2 * kernel.support_radius
    M = c.size - 1
    tc = 1.0 / cutoff**2
    q = (np.arange(M + 1) ** 2) / L**2
    denom = 1.0 - q * tc
    if np.any(denom <= 0):
        return math.inf, 0.0, UNCERTIFIED
    t = np.linspace(0.0, tc, 257)
    G = _cos_series_G(c, L, t)
    g2 = float(np.sum(np.abs(c) * 2 * q**2 / denom**3))
    slack = g2 * (t[1] - t[0]) ** 2 / 8.0
    sup_g = float(np.max(np.abs(G))) + slack
    g_inf = abs(float(G[0]))
    if beta == 1.0:
        return sup_g / math.pi, g_inf / math.pi, None
    if beta < 1.0:
        return cutoff ** (beta - 1.0) * sup_g / math.pi, 0.0, None
    scale = float(np.sum(np.abs(c)))
    if g_inf <= 1e-14 * scale and beta <= 3.0:
        g1 = float(np.sum(np.abs(c) * q / denom))
        return cutoff ** (beta - 3.0) * g1 / math.pi, 0.0, None
    return math.inf, 0.0, UNBOUNDED_RISK


def _tail(kernel: KernelSpec, beta: float, cutoff: float):
    fam = kernel.family
    A = abs(kernel.amplitude)
    if fam == "cosine_series":
        return _cos_series_tail(kernel, beta, cutoff)
    if fam == "gaussian":
        w = kernel.width
        peak = math.sqrt(beta / (2 * math.pi)) / w
        xi = max(cutoff, peak)
        return A * w * xi**beta * math.exp(-math.pi * (w * xi) ** 2), 0.0, None
    if fam == "characteristic":
        if beta > 1.0:
            return math.inf, 0.0, UNBOUNDED_RISK
        # |u_hat| <= V(u) / (2 pi xi) with V = 2A
        return A * cutoff ** (beta - 1.0) / math.pi, (A / math.pi if beta == 1.0 else 0.0), None
    if fam == "power":
        p = kernel.exponent
        L = 2 * kernel.support_radius
        if p >= 1.0 and beta <= 2.0:
            # |u_hat| <= V(u') / (4 pi^2 xi^2), V(u') = 8 p A / L
            return A * 8 * p / (4 * math.pi**2 * L) * cutoff ** (beta - 2.0), 0.0, None
        if beta <= 1.0:
            return A * cutoff ** (beta - 1.0) / math.pi, 0.0, None
        return math.inf, 0.0, UNBOUNDED_RISK
    # sampled: piecewise linear interpolant
    vals = kernel.coefficients
    R = kernel.support_radius
    jump = abs(vals[-1])
    if jump > 0 or beta > 2.0:
        if beta > 1.0:
            return math.inf, 0.0, UNBOUNDED_RISK
        return total_variation(kernel) / (2 * math.pi) * cutoff ** (beta - 1.0), 0.0, None
    h = R / (vals.size - 1)
    slopes = np.diff(vals) / h
    v1 = 2.0 * (float(np.sum(np.abs(np.diff(slopes)))) + abs(slopes[-1]) + abs(slopes[0]))
    return v1 / (4 * math.pi**2) * cutoff ** (beta - 2.0), 0.0, None


# Weighted sup --------------------------------------------------------------

def default_cutoff(kernel: KernelSpec, beta: float) -> float:
    """max(50, 20/beta) in units of the kernel's natural frequency 1/(2R)."""
    return max(50.0, 20.0 / beta) / (2 * kernel.natural_radius)


def _scan(kernel: KernelSpec, beta: float, cutoff: float):
    L = 2 * kernel.natural_radius
    h = min(1.0 / POINTS_PER_UNIT, 1.0 / (POINTS_PER_UNIT * L))
    n = int(math.ceil(cutoff / h))
    grid = np.linspace(0.0, cutoff, n + 1)

    def weighted(xi):
        xi = np.asarray(xi, dtype=float)
        return np.abs(xi) ** beta * np.abs(fourier(kernel, xi))

    w = weighted(grid)
    interior = np.flatnonzero((w[1:-1] >= w[:-2]) & (w[1:-1] >= w[2:])) + 1
    idx = list(interior)
    if w[-1] > w[-2]:
        idx.append(n)
    if not idx:
        idx = [int(np.argmax(w))]
    idx = np.asarray(idx)
    if not _closed_form(kernel):
        # refine only maxima that can compete with the best grid value
        idx = idx[w[idx] >= 0.95 * w.max()]
    lo = grid[np.maximum(idx - 1, 0)]
    hi = grid[np.minimum(idx + 1, n)]
    x, v = golden_maximize(weighted, lo, hi, rtol=REFINE_RTOL)
    # the grid point itself is also a valid lower bound
    better = w[idx] > v
    x = np.where(better, grid[idx], x)
    v = np.where(better, w[idx], v)
    return x, v, grid.size


def weighted_sup(kernel: KernelSpec, beta: float = 1.0, cutoff: float | None = None) -> SupNormResult:
    """Certified sup over xi >= 0 of xi^beta |u_hat(xi)|.

    Grid scan on [0, cutoff], golden-section refinement of every local
    maximum, then a tail bound for xi > cutoff. Ties go to the smallest
    maximiser. Cosine-series kernels double the cutoff (up to 64x) until the
    tail is certified.
    """
    if not beta > 0.5:
        raise PreconditionError("weighted_sup needs beta > 1/2")
    c = default_cutoff(kernel, beta) if cutoff is None else float(cutoff)
    if not c > 0:
        raise PreconditionError("cutoff must be positive")
    if kernel.family == "cosine_series":
        M = len(kernel.params) - 1
        c = max(c, 2.0 * M / (2 * kernel.support_radius))
    doublings = MAX_CUTOFF_DOUBLINGS if kernel.family == "cosine_series" else 0
    for attempt in range(doublings + 1):
        xs, vs, npts = _scan(kernel, beta, c)
        vmax = float(vs.max())
        ties = vs >= vmax * (1.0 - TIE_RTOL)
        argmax = float(xs[ties].min())
        if _closed_form(kernel):
            polished = _polish(kernel, beta, argmax)
            pv = polished**beta * abs(fourier(kernel, polished))
            if pv >= vmax * (1.0 - 4 * np.finfo(float).eps):
                argmax = polished
                vmax = max(vmax, pv)
        tail, limit, status = _tail(kernel, beta, c)
        value = vmax
        if limit > vmax * (1.0 + TIE_RTOL):
            value, argmax = limit, math.inf
        if status is None:
            status = CERTIFIED if tail <= value * (1.0 + CERT_RTOL) else UNCERTIFIED
        if status != UNCERTIFIED or attempt == doublings:
            break
        c *= 2.0
    return SupNormResult(float(value), float(argmax), float(c), float(tail), int(npts), float(beta), status)


# Plancherel self-test -----------------------------------------------------

class PlancherelPair(NamedTuple):
    real_space: float
    spectral: float
    tail_bound: float


def _envelope(kernel: KernelSpec, cutoff: float):
    """(E, order) with |u_hat(xi)| <= E / xi^order for xi >= cutoff."""
    A = abs(kernel.amplitude)
    fam = kernel.family
    if fam == "power" and kernel.exponent >= 1.0:
        return A * 8 * kernel.exponent / (4 * math.pi**2 * 2 * kernel.support_radius), 2
    if fam == "cosine_series":
        tail, _, _ = _cos_series_tail(kernel, 1.0, cutoff)
        return tail, 1
    return total_variation(kernel) / (2 * math.pi), 1


def plancherel_check(f: KernelSpec, g: KernelSpec, cutoff: float = 200.0) -> PlancherelPair:
    """(integral of f g, integral of f_hat g_hat over [-cutoff, cutoff], tail bound)."""
    if not (math.isfinite(f.support_radius) and math.isfinite(g.support_radius)):
        raise PreconditionError("plancherel_check needs compactly supported kernels")
    R = min(f.support_radius, g.support_radius)
    real = 2.0 * adaptive_gauss_legendre(
        lambda x: evaluate(f, x) * evaluate(g, x), 0.0, R, tol=1e-13,
        breakpoints=(f.support_radius, g.support_radius),
    ).value
    omega = 2 * math.pi * (f.support_radius + g.support_radius)
    spec = 2.0 * adaptive_gauss_legendre(
        lambda xi: fourier(f, xi) * fourier(g, xi), 0.0, cutoff, tol=1e-11,
        panels=oscillation_panels(omega, 0.0, cutoff),
    ).value
    ef, of = _envelope(f, cutoff)
    eg, og = _envelope(g, cutoff)
    order = of + og
    tail = 2.0 * ef * eg * cutoff ** (1 - order) / (order - 1)
    return PlancherelPair(real, spec, tail)

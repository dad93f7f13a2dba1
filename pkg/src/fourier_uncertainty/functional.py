"""The scale-invariant uncertainty functional J and what is built on it.

    J(u) = sup|xi^beta u_hat|^alpha * (int |x|^alpha |u|)^beta / (int |u|)^(alpha+beta)

Also here: a randomized audit of the amplitude/dilation invariance, the
crossover in alpha between two kernels, and a discrete check of the
smoothing bound ||(u*f)'||_2 <= 2 pi sup|xi u_hat| ||f||_2.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .kernel import KernelSpec, ScaleTransform, apply_scale, evaluate, l1_norm, moment
from .spectral import PreconditionError, SupNormResult, weighted_sup

PRESCAN_POINTS = 64
BISECT_WIDTH = 1e-4
SCALE_RANGE = (0.1, 10.0)
DEFAULT_SPACING = 1.0 / 64.0
GAUSSIAN_TRUNCATION = 6.0  # in units of the width; exp(-36 pi) is far below roundoff


class DomainError(ValueError):
    """Input outside the functional's domain (zero kernel, empty signal)."""


class CrossoverError(RuntimeError):
    def __init__(self, brackets):
        self.brackets = brackets
        desc = ", ".join(f"[{a:.6g}, {b:.6g}]" for a, b in brackets)
        super().__init__(f"difference changes sign {len(brackets)} times; brackets: {desc}")


@dataclass(frozen=True)
class UncertaintyReport:
    alpha: float
    beta: float
    supnorm: SupNormResult
    moment_val: float
    l1_val: float
    J: float

    @property
    def certified(self) -> bool:
        return self.supnorm.certified

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "J": self.J,
            "moment": self.moment_val,
            "l1": self.l1_val,
            "certified": self.certified,
            "supnorm": self.supnorm.to_dict(),
        }


def compose_J(sup: float, mom: float, l1: float, alpha: float, beta: float) -> float:
    return sup**alpha * mom**beta / l1 ** (alpha + beta)


def _check(alpha, beta):
    if not alpha > 0:
        raise PreconditionError(f"alpha must be positive, got {alpha}")
    if not beta > 0.5:
        raise PreconditionError(f"beta must exceed 1/2, got {beta}")


def uncertainty(
    kernel: KernelSpec, alpha: float, beta: float = 1.0, sup: SupNormResult | None = None
) -> UncertaintyReport:
    """Evaluate J. A precomputed ``sup`` (same kernel and beta) may be passed in."""
    _check(alpha, beta)
    l1 = l1_norm(kernel)
    if not l1 > 0:
        raise DomainError("J is undefined for the zero kernel")
    if sup is None:
        sup = weighted_sup(kernel, beta)
    mom = moment(kernel, alpha)
    return UncertaintyReport(
        float(alpha), float(beta), sup, mom, l1, compose_J(sup.value, mom, l1, alpha, beta)
    )


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


def invariance_audit(
    kernel: KernelSpec, alpha: float, beta: float = 1.0, trials: int = 10, seed: int = 0, workers: int = 1
) -> float:
    """Max relative change of J under random v(x) = c u(x/L), (c, L) log-uniform in [0.1, 10]."""
    if trials < 1:
        raise PreconditionError("trials must be >= 1")
    base = uncertainty(kernel, alpha, beta).J
    rng = np.random.default_rng(seed)
    lo, hi = np.log(SCALE_RANGE)
    draws = np.exp(rng.uniform(lo, hi, size=(trials, 2)))

    def one(cl):
        scaled = apply_scale(kernel, ScaleTransform(float(cl[0]), float(cl[1])))
        return abs(uncertainty(scaled, alpha, beta).J - base) / base

    return max(_map(one, list(draws), workers))


class _JCurve:
    """J(alpha) for a fixed kernel; the sup norm depends only on beta so it is computed once."""

    def __init__(self, kernel: KernelSpec, beta: float):
        self.kernel = kernel
        self.beta = beta
        self.sup = weighted_sup(kernel, beta)
        self.l1 = l1_norm(kernel)
        if not self.l1 > 0:
            raise DomainError("J is undefined for the zero kernel")

    def __call__(self, alpha: float) -> float:
        return compose_J(self.sup.value, moment(self.kernel, alpha), self.l1, alpha, self.beta)


def crossover_table(kernel_a, kernel_b, alphas, beta: float = 1.0):
    """Rows (alpha, J_A, J_B) for plotting or CSV export."""
    ja, jb = _JCurve(kernel_a, beta), _JCurve(kernel_b, beta)
    return [(float(a), ja(a), jb(a)) for a in alphas]


def compare_crossover(
    kernel_a: KernelSpec,
    kernel_b: KernelSpec,
    alpha_lo: float = 1.0,
    alpha_hi: float = 2.0,
    beta: float = 1.0,
    width: float = BISECT_WIDTH,
    prescan: int = PRESCAN_POINTS,
) -> float | None:
    """Alpha where J_A - J_B changes sign, to within ``width``; None if it never does.

    A pre-scan on ``prescan`` points must find at most one sign change.
    """
    if not alpha_hi > alpha_lo > 0:
        raise PreconditionError("need 0 < alpha_lo < alpha_hi")
    _check(alpha_lo, beta)
    ja, jb = _JCurve(kernel_a, beta), _JCurve(kernel_b, beta)

    def g(a):
        return ja(a) - jb(a)

    grid = np.linspace(alpha_lo, alpha_hi, prescan)
    signs = np.sign([g(a) for a in grid])
    nz = [(a, s) for a, s in zip(grid, signs) if s != 0]
    brackets = []
    for (a0, s0), (a1, s1) in zip(nz[:-1], nz[1:]):
        if s0 != s1:
            brackets.append((float(a0), float(a1)))
    if not brackets:
        return None
    if len(brackets) > 1:
        raise CrossoverError(brackets)
    lo, hi = brackets[0]
    s_lo = np.sign(g(lo))
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        s = np.sign(g(mid))
        if s == 0:
            return float(mid)
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class SmoothingResult:
    lhs: float
    rhs: float
    ratio: float
    spacing: float
    sup: float

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio, "spacing": self.spacing, "sup": self.sup}


def sample_kernel(kernel: KernelSpec, h: float) -> np.ndarray:
    """Trapezoid-weighted samples h*u(jh) covering the support (convolution taps)."""
    R = kernel.support_radius
    if not math.isfinite(R):
        R = GAUSSIAN_TRUNCATION * kernel.width
    n = int(math.floor(R / h + 1e-9))
    x = np.arange(-n, n + 1) * h
    w = np.asarray(evaluate(kernel, x), dtype=float) * h
    if abs(n * h - R) <= 1e-9 * R and math.isfinite(kernel.support_radius):
        # endpoints sit on the support boundary
        w[0] *= 0.5
        w[-1] *= 0.5
    return w


def smoothing_bound(
    kernel: KernelSpec,
    signal,
    spacing: float = DEFAULT_SPACING,
    beta: float = 1.0,
    sup: SupNormResult | None = None,
) -> SmoothingResult:
    """Compare ||(u*f)'||_2 with 2 pi sup|xi^beta u_hat| ||f||_2 on a uniform grid.

    The convolution is zero padded and differentiated by central differences.
    """
    f = np.asarray(signal, dtype=float)
    if f.size == 0:
        raise DomainError("empty signal")
    if not np.all(np.isfinite(f)):
        raise DomainError("signal has non-finite samples")
    h = float(spacing)
    if not h > 0:
        raise PreconditionError("spacing must be positive")
    if sup is None:
        sup = weighted_sup(kernel, beta)
    conv = np.convolve(f, sample_kernel(kernel, h), mode="full")
    padded = np.concatenate(([0.0], conv, [0.0]))
    deriv = (padded[2:] - padded[:-2]) / (2.0 * h)
    lhs = math.sqrt(h * float(np.dot(deriv, deriv)))
    norm_f = math.sqrt(h * float(np.dot(f, f)))
    rhs = 2.0 * math.pi * sup.value * norm_f
    ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else math.inf)
    return SmoothingResult(lhs, rhs, ratio, h, sup.value)


def tone_signal(freq: float, length: float, spacing: float = DEFAULT_SPACING) -> np.ndarray:
    """Hann-windowed cos(2 pi freq x) on [0, length]; spectrum concentrated at ``freq``."""
    x = np.arange(0.0, length, spacing)
    return np.cos(2 * math.pi * freq * x) * np.hanning(x.size)

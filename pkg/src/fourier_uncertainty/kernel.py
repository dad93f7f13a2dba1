"""Even averaging kernels on the real line.

A kernel is an immutable :class:`KernelSpec`. The analytic families are
defined on the canonical support [-1/2, 1/2] and dilated through
``support_radius``; the amplitude lives in ``params``:

==============  ===================================  ======================================
family          params                               shape
==============  ===================================  ======================================
characteristic  ``(amplitude,)``                     A on [-R, R]
power           ``(p, amplitude)``                   A * max(0, 1 - |x/R|^p)
gaussian        ``(amplitude, width)``               A * exp(-pi x^2 / w^2), R = inf
cosine_series   ``(c_0, ..., c_M)``                  sum c_m cos(pi m x / R) on [-R, R]
sampled         values on ``np.linspace(0, R, n)``   piecewise linear, even extension
==============  ===================================  ======================================

With R = 1/2 the cosine series is sum c_m cos(2 pi m x).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _backend
from .quadrature import DEFAULT_TOL, MAX_DEPTH, QuadratureError

FAMILIES = ("characteristic", "power", "gaussian", "cosine_series", "sampled")
SAMPLED_POINTS = 2**14
NONNEG_GRID = 4096


class KernelError(ValueError):
    pass


@dataclass(frozen=True)
class ScaleTransform:
    """v(x) = amplitude * u(x / dilation)."""

    amplitude: float
    dilation: float

    def __post_init__(self):
        if not (self.amplitude > 0 and self.dilation > 0):
            raise KernelError("scale transform needs amplitude > 0 and dilation > 0")


@dataclass(frozen=True)
class KernelSpec:
    family: str
    params: tuple = ()
    support_radius: float = 0.5
    nonnegative: bool = False

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        fam = self.family
        if fam not in FAMILIES:
            raise KernelError(f"unknown kernel family {fam!r}")
        R = float(self.support_radius)
        object.__setattr__(self, "support_radius", R)
        if fam == "gaussian":
            if R != math.inf:
                raise KernelError("gaussian kernels have infinite support_radius")
        elif not (0 < R < math.inf):
            raise KernelError("support_radius must be positive and finite")
        if fam == "power" and (len(self.params) < 1 or self.params[0] <= 0):
            raise KernelError("power kernel needs an exponent p > 0")
        if fam in ("cosine_series", "sampled") and len(self.params) == 0:
            raise KernelError(f"{fam} kernel needs at least one parameter")
        if fam == "gaussian" and self.width <= 0:
            raise KernelError("gaussian width must be positive")
        if self.nonnegative:
            x = np.linspace(0.0, self.natural_radius, NONNEG_GRID)
            if np.any(evaluate(self, x) < -1e-12 * max(1.0, abs(self.amplitude))):
                raise KernelError("kernel flagged nonnegative takes negative values")

    # Derived descriptors -------------------------------------------------
    @property
    def amplitude(self) -> float:
        if self.family == "characteristic":
            return self.params[0] if self.params else 1.0
        if self.family == "power":
            return self.params[1] if len(self.params) > 1 else 1.0
        if self.family == "gaussian":
            return self.params[0] if self.params else 1.0
        return 1.0

    @property
    def exponent(self) -> float:
        return self.params[0]

    @property
    def width(self) -> float:
        return self.params[1] if len(self.params) > 1 else 1.0

    @property
    def natural_radius(self) -> float:
        """Length scale used for grids: R, or w/2 for the Gaussian (mass w)."""
        if self.family == "gaussian":
            return 0.5 * self.width
        return self.support_radius

    @property
    def coefficients(self) -> np.ndarray:
        return np.asarray(self.params, dtype=float)

    # Serialisation -------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "params": list(self.params),
            "support_radius": "inf" if self.support_radius == math.inf else self.support_radius,
            "nonnegative": self.nonnegative,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "KernelSpec":
        fam = d["family"]
        R = d.get("support_radius")
        if R is None:
            R = math.inf if fam == "gaussian" else 0.5
        return cls(fam, tuple(d.get("params", ())), float(R), bool(d.get("nonnegative", False)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def characteristic(amplitude: float = 1.0, radius: float = 0.5) -> KernelSpec:
    return KernelSpec("characteristic", (amplitude,), radius, nonnegative=amplitude > 0)


def power(p: float, amplitude: float = 1.0, radius: float = 0.5) -> KernelSpec:
    return KernelSpec("power", (p, amplitude), radius, nonnegative=amplitude > 0)


def gaussian(amplitude: float = 1.0, width: float = 1.0) -> KernelSpec:
    return KernelSpec("gaussian", (amplitude, width), math.inf, nonnegative=amplitude > 0)


def cosine_series(coeffs: Sequence[float], radius: float = 0.5, nonnegative: bool = False) -> KernelSpec:
    return KernelSpec("cosine_series", tuple(coeffs), radius, nonnegative)


def sampled(values: Sequence[float], radius: float) -> KernelSpec:
    return KernelSpec("sampled", tuple(values), radius)


def from_function(func, radius: float, n: int = SAMPLED_POINTS) -> KernelSpec:
    """Sample an even function on [0, R]; the documented lossy fallback."""
    x = np.linspace(0.0, radius, n)
    return sampled(np.asarray(func(x), dtype=float), radius)


def parse_kernel(text: str) -> KernelSpec:
    """Kernel from a family name ("power:2", "power(2)"), inline JSON or a JSON file path."""
    t = text.strip()
    if t.startswith("{"):
        return KernelSpec.from_dict(json.loads(t))
    if t.endswith(".json"):
        with open(t) as fh:
            return KernelSpec.from_dict(json.load(fh))
    name, arg = t, None
    for sep in (":", "("):
        if sep in t:
            name, arg = t.split(sep, 1)
            arg = arg.rstrip(")")
            break
    if name == "characteristic":
        return characteristic()
    if name == "gaussian":
        return gaussian()
    if name == "power":
        if arg is None:
            raise KernelError("power kernel needs an exponent, e.g. power:2")
        return power(float(arg))
    raise KernelError(f"cannot parse kernel {text!r}")


# Pointwise evaluation ----------------------------------------------------

def evaluate(kernel: KernelSpec, x):
    """Kernel values at ``x`` (scalar or array); exactly 0 outside the support."""
    xa = np.abs(np.asarray(x, dtype=float))
    fam = kernel.family
    R = kernel.support_radius
    if fam == "gaussian":
        out = kernel.amplitude * np.exp(-math.pi * (xa / kernel.width) ** 2)
    elif fam == "characteristic":
        out = np.where(xa <= R, kernel.amplitude, 0.0)
    elif fam == "power":
        out = np.where(xa <= R, kernel.amplitude * (1.0 - (np.minimum(xa, R) / R) ** kernel.exponent), 0.0)
    elif fam == "cosine_series":
        m = np.arange(len(kernel.params))
        vals = np.cos(np.multiply.outer(xa, m) * (math.pi / R)) @ kernel.coefficients
        out = np.where(xa <= R, vals, 0.0)
    else:
        vals = kernel.coefficients
        grid = np.linspace(0.0, R, vals.size)
        out = np.where(xa <= R, np.interp(xa, grid, vals), 0.0)
    return float(out) if np.ndim(out) == 0 else out


# Norms and moments -------------------------------------------------------

def _sign_pieces(kernel: KernelSpec) -> list[tuple[float, float, float]]:
    """Split [0, R] into (a, b, sign) pieces on which the cosine series keeps its sign."""
    from scipy.optimize import brentq

    R = kernel.support_radius
    n = max(NONNEG_GRID, 64 * len(kernel.params))
    x = np.linspace(0.0, R, n + 1)
    y = evaluate(kernel, x)
    cuts = [0.0]
    f = lambda t: evaluate(kernel, t)
    for i in range(n):
        if y[i] == 0.0 and 0 < i:
            if cuts[-1] != x[i]:
                cuts.append(float(x[i]))
        elif y[i] * y[i + 1] < 0:
            cuts.append(brentq(f, x[i], x[i + 1], xtol=1e-15, rtol=1e-15))
    cuts.append(R)
    pieces = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b > a:
            s = evaluate(kernel, 0.5 * (a + b))
            pieces.append((a, b, 1.0 if s >= 0 else -1.0))
    return pieces


def _cos_series_antiderivative(kernel: KernelSpec, x: float) -> float:
    R = kernel.support_radius
    c = kernel.coefficients
    val = c[0] * x
    for m in range(1, c.size):
        k = math.pi * m / R
        val += c[m] * math.sin(k * x) / k
    return val


@lru_cache(maxsize=65536)
def _xpow_cos(q: float, omega: float, a: float, b: float) -> float:
    val, err, ok = _backend.xpow_cos_integral(q, omega, a, b, DEFAULT_TOL * 1e-2, MAX_DEPTH)
    if not ok:
        raise QuadratureError("moment quadrature did not converge", err, val)
    return val


def _sampled_trapezoid(kernel: KernelSpec, weight) -> float:
    vals = np.abs(kernel.coefficients)
    x = np.linspace(0.0, kernel.support_radius, vals.size)
    return 2.0 * float(np.trapezoid(vals * weight(x), x))


def l1_norm(kernel: KernelSpec) -> float:
    """Integral of |u| over the real line."""
    fam = kernel.family
    A = abs(kernel.amplitude)
    R = kernel.support_radius
    if fam == "characteristic":
        return A * 2.0 * R
    if fam == "power":
        p = kernel.exponent
        return A * 2.0 * R * p / (p + 1.0)
    if fam == "gaussian":
        return A * kernel.width
    if fam == "cosine_series":
        total = 0.0
        for a, b, s in _sign_pieces(kernel):
            total += s * (_cos_series_antiderivative(kernel, b) - _cos_series_antiderivative(kernel, a))
        return 2.0 * total
    return _sampled_trapezoid(kernel, lambda x: 1.0)


def moment(kernel: KernelSpec, alpha: float) -> float:
    """Integral of |x|^alpha |u(x)| over the real line."""
    if not alpha > 0:
        raise KernelError("moment order must be positive")
    fam = kernel.family
    A = abs(kernel.amplitude)
    R = kernel.support_radius
    if fam == "characteristic":
        return A * 2.0 * R ** (alpha + 1) / (alpha + 1)
    if fam == "power":
        p = kernel.exponent
        return A * 2.0 * R ** (alpha + 1) * (1.0 / (alpha + 1) - 1.0 / (alpha + p + 1))
    if fam == "gaussian":
        w = kernel.width
        return A * w ** (alpha + 1) * math.gamma((alpha + 1) / 2) / math.pi ** ((alpha + 1) / 2)
    if fam == "cosine_series":
        c = kernel.coefficients
        total = 0.0
        for a, b, s in _sign_pieces(kernel):
            piece = 0.0
            for m in range(c.size):
                if c[m] != 0.0:
                    piece += c[m] * _xpow_cos(float(alpha), math.pi * m / R, a, b)
            total += s * piece
        return 2.0 * total
    return _sampled_trapezoid(kernel, lambda x: x**alpha)


def negativity_mass(kernel: KernelSpec, n: int = NONNEG_GRID) -> float:
    """Integral of max(0, -u), trapezoidal on an ``n``-point grid."""
    if kernel.family == "gaussian":
        return 0.0 if kernel.amplitude >= 0 else l1_norm(kernel)
    x = np.linspace(0.0, kernel.natural_radius, n)
    neg = np.maximum(0.0, -evaluate(kernel, x))
    return 2.0 * float(np.trapezoid(neg, x))


def total_variation(kernel: KernelSpec, n: int = SAMPLED_POINTS) -> float:
    """Total variation of u over the real line, including the jumps at +-R."""
    fam = kernel.family
    A = abs(kernel.amplitude)
    if fam == "characteristic":
        return 2.0 * A
    if fam in ("power", "gaussian"):
        return 2.0 * A
    if fam == "cosine_series":
        x = np.linspace(0.0, kernel.support_radius, n)
        y = evaluate(kernel, x)
    else:
        y = kernel.coefficients
    return 2.0 * (float(np.sum(np.abs(np.diff(y)))) + abs(float(y[-1])))


def apply_scale(kernel: KernelSpec, t: ScaleTransform) -> KernelSpec:
    """Representation of v(x) = c u(x / L); the support radius scales by L."""
    c, L = t.amplitude, t.dilation
    fam = kernel.family
    if fam == "characteristic":
        return KernelSpec(fam, (c * kernel.amplitude,), kernel.support_radius * L, kernel.nonnegative)
    if fam == "power":
        return KernelSpec(fam, (kernel.exponent, c * kernel.amplitude), kernel.support_radius * L, kernel.nonnegative)
    if fam == "gaussian":
        return KernelSpec(fam, (c * kernel.amplitude, kernel.width * L), math.inf, kernel.nonnegative)
    return KernelSpec(fam, tuple(c * kernel.coefficients), kernel.support_radius * L, kernel.nonnegative)


def builtin_kernels() -> dict[str, KernelSpec]:
    """The named reference kernels used in sweeps and sanity checks."""
    return {
        "characteristic": characteristic(),
        "gaussian": gaussian(),
        "power(1)": power(1.0),
        "power(2)": power(2.0),
        "power(4)": power(4.0),
    }

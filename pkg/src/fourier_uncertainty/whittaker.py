"""Half-integer samples of even perturbations and the first-order stability inequality.

A perturbation is f(x) = sum_m c_m cos(2 pi m x) on [-1/2, 1/2]. Its
transform is band-limited, so it is fixed by the samples f_hat(k - 1/2)
(shifted Shannon-Whittaker). The stability inequality compares

    max_hat(f) = max over j >= 1 of (-1)^(j+1) (j - 1/2) f_hat(j - 1/2)

against (alpha+1)/(alpha pi) * int (1 - |2x|^alpha) f(x) dx.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _backend
from .hypergeom import a_k_quadrature
from .kernel import KernelSpec, cosine_series

DEFAULT_K_MAX = 1000
DEFAULT_ALT_K = 1000
DEFAULT_ZETA_K = 10_000
QUAD_TOL = 1e-15
PERTURBATION_DIM = 8
MARGIN_TOL = 1e-9


@dataclass(frozen=True)
class EvenPerturbation:
    coeffs: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        if not c:
            raise ValueError("perturbation needs at least one coefficient")
        if not all(math.isfinite(v) for v in c):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def random(cls, rng: np.random.Generator, dim: int = PERTURBATION_DIM) -> "EvenPerturbation":
        """Normal coefficients c_0..c_dim scaled to unit l2 norm."""
        c = rng.standard_normal(dim + 1)
        return cls(tuple(c / np.linalg.norm(c)))

    @classmethod
    def from_seed(cls, seed: int, dim: int = PERTURBATION_DIM) -> "EvenPerturbation":
        return cls.random(np.random.default_rng(seed), dim)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coeffs)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        m = np.arange(len(self.coeffs))
        vals = np.cos(2 * math.pi * np.multiply.outer(x, m)) @ self.array
        return np.where(np.abs(x) <= 0.5, vals, 0.0)

    def to_kernel(self) -> KernelSpec:
        return cosine_series(self.coeffs)

    def to_list(self) -> list:
        return list(self.coeffs)


@dataclass(frozen=True)
class HatSamples:
    """f_hat(k - 1/2) for k = 1..K."""

    values: tuple

    @property
    def K(self) -> int:
        return len(self.values)


def _overlap(ks, m):
    """int cos(2 pi m x) cos(2 pi (k - 1/2) x) dx over [-1/2, 1/2]."""
    t = np.asarray(ks, dtype=float) - 0.5
    m = np.asarray(m, dtype=float)
    k_sign = np.where(np.asarray(ks) % 2 == 1, 1.0, -1.0)
    m_sign = np.where(m % 2 == 0, 1.0, -1.0)
    tt = np.multiply.outer(t, np.ones_like(m))
    return np.multiply.outer(k_sign, m_sign) * tt / (math.pi * (tt**2 - m**2))


def hat_samples(f: EvenPerturbation, K: int) -> HatSamples:
    ks = np.arange(1, K + 1)
    return HatSamples(tuple(_overlap(ks, np.arange(len(f.coeffs))) @ f.array))


def hat_half_integer(f: EvenPerturbation, k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    return float((_overlap(np.array([k]), np.arange(len(f.coeffs))) @ f.array)[0])


def shannon_reconstruct(samples: HatSamples, xi: float) -> tuple[float, float]:
    """Shifted cardinal series for f_hat(xi) from half-integer samples.

    Returns (value, truncation estimate). Negative-index samples come from
    evenness: f_hat(-k + 1/2) = f_hat(k - 1/2). The estimate assumes the
    samples decay like C/k with C read off the last few samples.
    """
    v = np.asarray(samples.values)
    K = v.size
    k = np.arange(1, K + 1)
    val = float(np.sum(v * (np.sinc(xi - k + 0.5) + np.sinc(xi + k - 0.5))))
    lead = K - 0.5 - abs(xi)
    if lead <= 0:
        return val, math.inf
    tail_k = k[-min(K, 8):]
    C = float(np.max(tail_k * np.abs(v[-tail_k.size:])))
    return val, 2.0 * C / (math.pi * lead)


def weighted_samples(f: EvenPerturbation, k_max: int = DEFAULT_K_MAX) -> np.ndarray:
    """(-1)^(j+1) (j - 1/2) f_hat(j - 1/2) for j = 1..2 k_max + 2.

    Odd j are the branch xi = 2k + 1/2, even j the branch xi = 2k + 3/2,
    for k = 0..k_max.
    """
    j = np.arange(1, 2 * k_max + 3)
    vals = _overlap(j, np.arange(len(f.coeffs))) @ f.array
    sign = np.where(j % 2 == 1, 1.0, -1.0)
    return sign * (j - 0.5) * vals


def hat_limit(f: EvenPerturbation) -> float:
    """Limit of the weighted samples as j -> infinity: sum (-1)^m c_m / pi."""
    m = np.arange(len(f.coeffs))
    return float(np.sum(np.where(m % 2 == 0, 1.0, -1.0) * f.array) / math.pi)


def max_hat(f: EvenPerturbation, k_max: int = DEFAULT_K_MAX) -> float:
    if k_max < 8:
        raise ValueError("k_max must be >= 8")
    return max(float(np.max(weighted_samples(f, k_max))), hat_limit(f))


@lru_cache(maxsize=None)
def power_cos_moment(alpha: float, m: int) -> float:
    """int (1 - |2x|^alpha) cos(2 pi m x) dx over [-1/2, 1/2]."""
    if m == 0:
        return alpha / (alpha + 1.0)
    val, err, ok = _backend.power_cos_integral(alpha, 2 * math.pi * m, 0.0, 0.5, QUAD_TOL / 2, 40)
    if not ok:
        raise ArithmeticError(f"quadrature did not converge (error {err:.3e})")
    return 2.0 * val


def kernel_pairing(f: EvenPerturbation, alpha: float) -> float:
    """int (1 - |2x|^alpha) f(x) dx."""
    b = np.array([power_cos_moment(float(alpha), m) for m in range(len(f.coeffs))])
    return float(b @ f.array)


def lemma_rhs(f: EvenPerturbation, alpha: float) -> float:
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return (alpha + 1.0) / (alpha * math.pi) * kernel_pairing(f, alpha)


@dataclass(frozen=True)
class StabilityResult:
    lhs: float
    rhs: float
    margin: float

    @property
    def holds(self) -> bool:
        return self.margin >= -MARGIN_TOL

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "margin": self.margin, "holds": self.holds}


def stability_verify(f: EvenPerturbation, alpha: float, k_max: int = DEFAULT_K_MAX) -> StabilityResult:
    lhs = max_hat(f, k_max)
    rhs = lemma_rhs(f, alpha)
    return StabilityResult(lhs, rhs, lhs - rhs)


def stability_batch(alpha: float, seeds, dim: int = PERTURBATION_DIM, k_max: int = DEFAULT_K_MAX, workers: int = 1):
    """Rows (seed, lhs, rhs, margin) for seeded random perturbations."""

    def one(seed):
        r = stability_verify(EvenPerturbation.from_seed(int(seed), dim), alpha, k_max)
        return int(seed), r.lhs, r.rhs, r.margin

    seeds = list(seeds)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, seeds))
    return [one(s) for s in seeds]


def plancherel_route(f: EvenPerturbation, alpha: float, K: int = DEFAULT_ALT_K) -> tuple[float, float]:
    """int (1 - |2x|^alpha) f dx in real space and as 2 sum_{k<=K} a_k f_hat(k - 1/2)."""
    real = kernel_pairing(f, alpha)
    a = np.array([a_k_quadrature(float(alpha), k) for k in range(1, K + 1)])
    spectral = 2.0 * float(a @ np.asarray(hat_samples(f, K).values))
    return real, spectral


def _power_tail(terms: np.ndarray, s: np.ndarray) -> float:
    """Integral estimate of sum_{k>K} t_k assuming t ~ C s^-p, p fitted on same-parity terms."""
    t2, t0 = abs(terms[-1]), abs(terms[-3])
    s2, s0 = s[-1], s[-3]
    if t2 == 0 or t0 == 0:
        return 0.0
    p = math.log(t0 / t2) / math.log(s2 / s0)
    if p <= 1.0:
        return math.inf
    return t2 * s2 / (2.0 * (p - 1.0))


@dataclass(frozen=True)
class SumIdentities:
    alpha: float
    K: int
    zeta_K: int
    zeta4_partial: float
    zeta4_tail: float
    zeta4_corrected: float
    zeta4_error_bound: float
    zeta4_target: float
    alt_sum_partial: float
    alt_tail_estimate: float
    alt_target: float

    @property
    def zeta4_ok(self) -> bool:
        return abs(self.zeta4_corrected - self.zeta4_target) <= self.zeta4_error_bound

    @property
    def alt_ok(self) -> bool:
        return abs(self.alt_sum_partial - self.alt_target) <= self.alt_tail_estimate

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["zeta4_abs_error"] = abs(self.zeta4_corrected - self.zeta4_target)
        d["alt_abs_error"] = abs(self.alt_sum_partial - self.alt_target)
        d["zeta4_ok"] = self.zeta4_ok
        d["alt_ok"] = self.alt_ok
        return d


def zeta4_odd(K: int) -> tuple[float, float, float]:
    """Partial sum of 1/(2k-1)^4 for k <= K, the midpoint tail estimate, and its half-width.

    The tail lies between the integrals from K+1 and from K of (2t-1)^-4.
    """
    s = 2.0 * np.arange(1, K + 1) - 1.0
    partial = math.fsum(s**-4.0)
    lo = 1.0 / (6.0 * (2.0 * K + 1.0) ** 3)
    hi = 1.0 / (6.0 * (2.0 * K - 1.0) ** 3)
    return partial, 0.5 * (lo + hi), 0.5 * (hi - lo)


def alternating_sum(alpha: float, K: int) -> tuple[float, float]:
    """4 sum_{k<=K} a_k (-1)^(k+1) / (2k-1) and a tail estimate.

    The estimate doubles the fitted power-law tail and adds the accumulated
    quadrature tolerance.
    """
    ks = np.arange(1, K + 1)
    s = 2.0 * ks - 1.0
    a = np.array([a_k_quadrature(float(alpha), int(k)) for k in ks])
    terms = 4.0 * a * np.where(ks % 2 == 1, 1.0, -1.0) / s
    partial = math.fsum(terms)
    tail = 2.0 * _power_tail(terms, s) + 4.0 * K * QUAD_TOL
    return partial, tail


def sum_identities(alpha: float, K: int = DEFAULT_ALT_K, zeta_K: int = DEFAULT_ZETA_K) -> SumIdentities:
    if K < 10 or zeta_K < 10:
        raise ValueError("K must be >= 10")
    z, ztail, zhw = zeta4_odd(zeta_K)
    alt, alt_tail = alternating_sum(alpha, K)
    return SumIdentities(
        alpha=float(alpha),
        K=int(K),
        zeta_K=int(zeta_K),
        zeta4_partial=z,
        zeta4_tail=ztail,
        zeta4_corrected=z + ztail,
        zeta4_error_bound=zhw + 4.0 * zeta_K * np.finfo(float).eps,
        zeta4_target=math.pi**4 / 96.0,
        alt_sum_partial=alt,
        alt_tail_estimate=alt_tail,
        alt_target=alpha * math.pi / (alpha + 1.0),
    )

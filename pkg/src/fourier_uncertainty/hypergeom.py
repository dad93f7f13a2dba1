"""Certified 1F2 evaluation and the alternating sign pattern of the a_k coefficients.

Two families of coefficients live here and are never mixed up:

* ``a_k_hyper(alpha, k)`` is 1F2((1+a)/2; 3/2, (3+a)/2; -pi^2 (2k-1)^2 / 16).
* ``a_k_quadrature(alpha, k)`` is the cosine integral of 1 - |2x|^a against
  frequency pi (2k-1) over [-1/2, 1/2].

They satisfy a_k_quadrature = alpha / (alpha + 1) * a_k_hyper, so they share
signs. ``a_k_closed`` gives the elementary form of the half-interval sine
moment for integer alpha in 2..6.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np

from . import _backend

MAX_TERMS = 100_000
MAX_PRECISION = 1 << 16
QUAD_TOL = 1e-15
QUAD_DEPTH = 40
CLOSED_ALPHAS = (2, 3, 4, 5, 6)
REL_TARGET = 1e-13


class HypergeomError(ArithmeticError):
    """Series did not converge or arguments are outside the domain."""


@dataclass(frozen=True)
class SeriesValue:
    """A partial sum together with a rigorous bound on its total error.

    ``trunc_bound`` covers both the discarded tail and accumulated rounding,
    so the sign of ``value`` is certain whenever ``|value| > trunc_bound``.
    """

    value: float
    trunc_bound: float
    terms_used: int
    precision_bits: int = 53

    @property
    def certified(self) -> bool:
        return abs(self.value) > self.trunc_bound

    @property
    def sign(self) -> int:
        """+1 or -1 when certified, 0 otherwise."""
        if not self.certified:
            return 0
        return 1 if self.value > 0 else -1

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "trunc_bound": self.trunc_bound,
            "terms_used": self.terms_used,
            "precision_bits": self.precision_bits,
            "sign": self.sign,
        }


def _check_params(b1, b2):
    for b in (b1, b2):
        if b <= 0 and float(b).is_integer():
            raise HypergeomError(f"lower parameter {b} is a nonpositive integer")


def _series_mp(a, b1, b2, x, prec):
    """Same recurrence as the double kernel, in ``prec``-bit arithmetic."""
    with mpmath.workprec(prec):
        a_, b1_, b2_, x_ = mpmath.mpf(a), mpmath.mpf(b1), mpmath.mpf(b2), mpmath.mpf(x)
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        abs_total = mpmath.mpf(1)
        n_mono = math.ceil(2.0 * max(abs(a), abs(b1), abs(b2), 1.0))
        ax = abs(x)
        stop = mpmath.ldexp(1, -prec)
        n = 0
        while n < MAX_TERMS:
            nxt = term * (a_ + n) * x_ / ((b1_ + n) * (b2_ + n) * (n + 1))
            m = n + 1
            r_bound = ax * (abs(a) + m) / (abs((b1 + m) * (b2 + m)) * (m + 1.0))
            if n >= n_mono and r_bound < 1.0 and (abs(nxt) < stop * abs(total) or nxt == 0):
                tail = float(abs(nxt)) / (1.0 - r_bound)
                rounding = float((6 * (n + 1) + 10) * mpmath.ldexp(abs_total, -prec))
                return float(total), tail, rounding, n + 1, True
            term = nxt
            total += term
            abs_total += abs(term)
            n += 1
        return float(total), math.inf, math.inf, n + 1, False


def _log2_peak_term(a, b1, b2, x) -> float:
    """log2 of the largest term magnitude, accumulated in log space."""
    lt = 0.0
    best = 0.0
    ax = abs(x)
    if ax == 0.0:
        return 0.0
    for n in range(MAX_TERMS):
        r = abs(a + n) * ax / (abs((b1 + n) * (b2 + n)) * (n + 1.0))
        if r == 0.0:
            break
        lt += math.log2(r)
        best = max(best, lt)
        if r < 1.0 and n > 2 * max(abs(a), abs(b1), abs(b2), 1.0):
            break
    return best


def eval_1F2(a: float, b1: float, b2: float, x: float, rtol: float = REL_TARGET) -> SeriesValue:
    """Evaluate 1F2(a; b1, b2; x) with a certified error bound.

    Tries double precision first. If the bound is not below ``rtol * |value|``
    the sum is redone with enough extra bits to absorb the cancellation
    between the largest terms, doubling the precision until it is.
    """
    _check_params(b1, b2)
    if x == 0.0:
        return SeriesValue(1.0, 0.0, 1)
    total, tail, rounding, n, ok = _backend.hyp1f2_series(a, b1, b2, x, MAX_TERMS)
    if not ok:
        raise HypergeomError(
            f"1F2({a}; {b1}, {b2}; {x}) did not converge in {MAX_TERMS} terms (partial sum {total})"
        )
    if math.isfinite(total) and tail + rounding <= rtol * abs(total):
        return SeriesValue(float(total), float(tail + rounding), int(n), 53)

    prec = 64 + int(math.ceil(_log2_peak_term(a, b1, b2, x))) + 53
    while prec <= MAX_PRECISION:
        total, tail, rounding, n, ok = _series_mp(a, b1, b2, x, prec)
        if not ok:
            raise HypergeomError(f"1F2({a}; {b1}, {b2}; {x}) did not converge in {MAX_TERMS} terms")
        if tail + rounding <= rtol * abs(total):
            return SeriesValue(total, tail + rounding, n, prec)
        prec *= 2
    # exhausted: report the bound honestly; caller sees an uncertified value
    return SeriesValue(total, tail + rounding, n, prec // 2)


def _omega(k: int) -> float:
    return math.pi * (2 * k - 1)


def hyper_args(alpha: float, k: int) -> tuple[float, float, float, float]:
    return (1.0 + alpha) / 2.0, 1.5, (3.0 + alpha) / 2.0, -(math.pi**2) * (2 * k - 1) ** 2 / 16.0


def a_k_hyper(alpha: float, k: int) -> SeriesValue:
    if k < 1:
        raise ValueError("k must be >= 1")
    return eval_1F2(*hyper_args(alpha, k))


# a_k_closed = ((-1)^(k+1) P(s) + Q(s)) / D(s) with s = 2k - 1.
# Coefficients are in powers of s, highest first.
def _closed_polys(alpha: int):
    pi = math.pi
    if alpha == 2:
        return [1.0], [0.0], [pi**2, 0, 0]
    if alpha == 3:
        return [pi, 0], [-2.0], [pi**3, 0, 0, 0]
    if alpha == 4:
        return [0.75 * pi**2, 0, -6.0], [0.0], [pi**4, 0, 0, 0, 0]
    if alpha == 5:
        return [pi**3, 0, -24 * pi, 0], [48.0], [2 * pi**5, 0, 0, 0, 0, 0]
    if alpha == 6:
        c = 5.0 / 16.0
        return [c * pi**4, 0, -48 * c * pi**2, 0, 384 * c], [0.0], [pi**6, 0, 0, 0, 0, 0, 0]
    raise ValueError(f"closed form only for alpha in {CLOSED_ALPHAS}, got {alpha}")


def _as_closed_alpha(alpha) -> int:
    if float(alpha) not in CLOSED_ALPHAS:
        raise ValueError(f"closed form only for alpha in {CLOSED_ALPHAS}, got {alpha}")
    return int(alpha)


def a_k_closed(alpha: int, k: int) -> float:
    """Integral of x^(alpha-1) sin(pi (2k-1) x) over [0, 1/2], elementary form."""
    P, Q, D = _closed_polys(_as_closed_alpha(alpha))
    if k < 1:
        raise ValueError("k must be >= 1")
    s = 2 * k - 1
    sign = 1.0 if k % 2 == 1 else -1.0
    return (sign * np.polyval(P, s) + np.polyval(Q, s)) / np.polyval(D, s)


@lru_cache(maxsize=4096)
def a_k_quadrature(alpha: float, k: int, tol: float = QUAD_TOL) -> float:
    """Cosine integral of (1 - |2x|^alpha) at frequency pi (2k - 1), by quadrature."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if k < 1:
        raise ValueError("k must be >= 1")
    val, err, ok = _backend.power_cos_integral(alpha, _omega(k), 0.0, 0.5, tol / 2, QUAD_DEPTH)
    if not ok:
        raise ArithmeticError(
            f"quadrature for alpha={alpha}, k={k} reached error estimate {2 * err:.3e} > {tol:.1e}"
        )
    return 2.0 * val


def sine_moment_quadrature(alpha: float, k: int, tol: float = QUAD_TOL) -> float:
    """Integral of x^(alpha-1) sin(pi (2k-1) x) over [0, 1/2] by quadrature."""
    val, err, ok = _backend.xpow_sin_integral(alpha - 1.0, _omega(k), 0.0, 0.5, tol, QUAD_DEPTH)
    if not ok:
        raise ArithmeticError(f"sine moment quadrature did not converge (error {err:.3e})")
    return val


def ibp_factor(alpha: float, k: int) -> float:
    """Positive factor turning the half-interval sine moment into a_k_quadrature."""
    return 2.0 ** (alpha + 1) * alpha / _omega(k)


def ibp_chain(alpha: float, k: int) -> float:
    """a_k_quadrature reconstructed via integration by parts.

    Uses the elementary sine moment where available, quadrature otherwise.
    """
    if float(alpha) in CLOSED_ALPHAS:
        inner = a_k_closed(int(alpha), k)
    else:
        inner = sine_moment_quadrature(alpha, k)
    return ibp_factor(alpha, k) * inner


def tail_certificate(alpha: int, K: int) -> dict:
    """Check that a_k has sign (-1)^(k+1) for every k > K.

    With s = 2k - 1 the sign is that of (-1)^(k+1) P(s) + Q(s), so it
    suffices that P(s) - |Q(s)| > 0 for all s >= 2K + 1. That holds when the
    leading coefficient is positive and every real root lies below 2K + 1.
    """
    P, Q, _ = _closed_polys(_as_closed_alpha(alpha))
    s0 = 2 * K + 1
    q_sign = 1.0 if np.polyval(Q, s0) >= 0 else -1.0
    # Q is a constant in every closed form, so |Q| is that constant with fixed sign
    diff = np.polysub(P, q_sign * np.asarray(Q, dtype=float))
    diff = np.trim_zeros(np.asarray(diff, dtype=float), "f")
    roots = np.roots(diff) if diff.size > 1 else np.array([])
    real = roots[np.abs(roots.imag) <= 1e-9 * np.maximum(1.0, np.abs(roots))].real
    largest = float(real.max()) if real.size else None
    below = largest is None or largest < s0 - 1e-9 * max(1.0, abs(largest))
    ok = diff[0] > 0 and below and np.polyval(diff, s0) > 0
    return {"holds": bool(ok), "s0": s0, "largest_real_root": largest, "leading": float(diff[0])}


@dataclass(frozen=True)
class SignCertificate:
    alpha: float
    K: int
    values: tuple = field(repr=False)
    verdict: str
    bad_k: int | None = None
    tail: dict | None = None
    closed_mismatches: tuple = ()

    @property
    def passed(self) -> bool:
        return self.verdict.startswith("PASS")

    def to_dict(self) -> dict:
        rows = []
        for k, v in enumerate(self.values, start=1):
            row = v.to_dict()
            row["k"] = k
            row["expected_sign"] = 1 if k % 2 == 1 else -1
            rows.append(row)
        return {
            "alpha": self.alpha,
            "K": self.K,
            "verdict": self.verdict,
            "bad_k": self.bad_k,
            "tail_certificate": self.tail,
            "closed_mismatches": list(self.closed_mismatches),
            "values": rows,
        }


def certify(alpha: float, K: int, workers: int = 1) -> SignCertificate:
    """Check the alternating pattern sign(a_k) = (-1)^(k+1) for k = 1..K.

    Verdicts: PASS, PASS-ALL-K (integer alpha in 2..6, every k certified by
    the closed form), FAIL(k) at the first wrong sign, INCONCLUSIVE(k) at the
    first k whose value does not clear its error bound.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    ks = range(1, K + 1)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = tuple(pool.map(lambda k: a_k_hyper(alpha, k), ks))
    else:
        values = tuple(a_k_hyper(alpha, k) for k in ks)

    closed = float(alpha) in CLOSED_ALPHAS
    mismatches = []
    verdict, bad = "PASS", None
    for k, v in zip(ks, values):
        expected = 1 if k % 2 == 1 else -1
        if closed:
            c = a_k_closed(int(alpha), k)
            if v.certified and c != 0.0 and math.copysign(1.0, c) != v.sign:
                mismatches.append(k)
        if not v.certified:
            verdict, bad = f"INCONCLUSIVE({k})", k
            break
        if v.sign != expected:
            verdict, bad = f"FAIL({k})", k
            break
    tail = None
    if verdict == "PASS" and closed:
        tail = tail_certificate(int(alpha), K)
        if tail["holds"] and not mismatches:
            verdict = "PASS-ALL-K"
    return SignCertificate(float(alpha), K, values, verdict, bad, tail, tuple(mismatches))

"""Search over cosine-series kernels and the local-minimality probe at the indicator.

Kernels are u(x) = sum_{m<=M} c_m cos(2 pi m x) on [-1/2, 1/2]; the
indicator is c = (1, 0, ..., 0).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .functional import DomainError, uncertainty
from .kernel import KernelSpec, cosine_series, evaluate, negativity_mass
from .whittaker import EvenPerturbation, PERTURBATION_DIM, stability_verify

DEFAULT_EPS_GRID = (1e-4, 3e-4, 1e-3, 3e-3, 1e-2)
NEGATIVITY_WEIGHT = 1e3
SIMPLEX_STEP = 0.05
RANDOM_START_SIGMA = 0.1
SLOPE_TOL = 1e-6


def _objective_J(coeffs, alpha, beta) -> float:
    """J of the cosine-series kernel, or +inf where it is undefined or uncertified."""
    k = cosine_series(tuple(float(c) for c in coeffs))
    try:
        rep = uncertainty(k, alpha, beta)
    except (DomainError, ArithmeticError, ValueError):
        return math.inf
    if not rep.certified or not math.isfinite(rep.J):
        return math.inf
    return rep.J


def project_start(start: KernelSpec | str | None, dim: int, seed: int = 0) -> np.ndarray:
    """Initial cosine coefficients for ``start``.

    "random" draws c_0 = 1 plus N(0, 0.1^2) noise on every coefficient; other
    kernels are projected onto cos(2 pi m x) on [-1/2, 1/2].
    """
    if start is None or (isinstance(start, str) and start == "characteristic"):
        c = np.zeros(dim + 1)
        c[0] = 1.0
        return c
    if isinstance(start, str) and start == "random":
        rng = np.random.default_rng(seed)
        c = RANDOM_START_SIGMA * rng.standard_normal(dim + 1)
        c[0] += 1.0
        return c
    if isinstance(start, str):
        raise ValueError(f"unknown start {start!r}")
    if start.family == "cosine_series" and start.support_radius == 0.5:
        c = np.zeros(dim + 1)
        src = start.coefficients[: dim + 1]
        c[: src.size] = src
        return c
    if start.family == "characteristic" and start.support_radius == 0.5:
        c = np.zeros(dim + 1)
        c[0] = start.amplitude
        return c
    x = np.linspace(-0.5, 0.5, 8193)
    u = evaluate(start, x)
    c = np.array([np.trapezoid(u * np.cos(2 * math.pi * m * x), x) for m in range(dim + 1)])
    c[1:] *= 2.0
    return c


@dataclass(frozen=True)
class MinimizeResult:
    kernel: KernelSpec
    J: float
    trace: tuple
    iterations: int
    evaluations: int
    negativity: float
    restarts: int

    def to_dict(self) -> dict:
        return {
            "J": self.J,
            "coefficients": list(self.kernel.params),
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "negativity_mass": self.negativity,
            "restarts": self.restarts,
            "trace": list(self.trace),
        }


def minimize(
    alpha: float,
    beta: float = 1.0,
    dim: int = 6,
    start: KernelSpec | str | None = "characteristic",
    max_iter: int = 500,
    seed: int = 0,
    nonnegative: bool = False,
    restarts: int = 1,
) -> MinimizeResult:
    """Nelder-Mead on the cosine coefficients c_0..c_dim.

    The objective is J plus 1e3 * (negativity mass)^2 when ``nonnegative``.
    The trace records the best objective seen after each iteration and never
    increases. After the first run the search restarts ``restarts`` times
    from the best point with a fresh simplex, sharing the iteration budget.
    """
    if dim < 0:
        raise ValueError("dim must be >= 0")
    x0 = project_start(start, dim, seed)
    memo: dict = {}

    def obj(c):
        key = tuple(np.asarray(c, dtype=float))
        if key not in memo:
            val = _objective_J(key, alpha, beta)
            if nonnegative and math.isfinite(val):
                val += NEGATIVITY_WEIGHT * negativity_mass(cosine_series(key)) ** 2
            memo[key] = val
        return memo[key]

    best_x, best_f = x0.copy(), obj(x0)
    trace = [best_f]
    iters = 0
    done_restarts = 0

    def record(xk):
        nonlocal best_x, best_f
        f = obj(xk)
        if f < best_f:
            best_x, best_f = np.array(xk, dtype=float), f
        trace.append(best_f)

    for run in range(restarts + 1):
        budget = max_iter - iters
        if budget <= 0:
            break
        base = best_x
        simplex = np.vstack([base] + [base + SIMPLEX_STEP * e for e in np.eye(base.size)])
        res = _scipy_minimize(
            obj,
            base,
            method="Nelder-Mead",
            callback=record,
            options={
                "maxiter": budget,
                "initial_simplex": simplex,
                "xatol": 1e-10,
                "fatol": 1e-14,
                "adaptive": False,
            },
        )
        iters += int(res.nit)
        if res.fun < best_f:
            best_x, best_f = np.array(res.x, dtype=float), float(res.fun)
            trace.append(best_f)
        if run > 0:
            done_restarts += 1

    kernel = cosine_series(tuple(float(c) for c in best_x))
    J = _objective_J(best_x, alpha, beta)
    return MinimizeResult(kernel, J, tuple(trace), iters, len(memo), negativity_mass(kernel), done_restarts)


def perturbed_indicator(f: EvenPerturbation, eps: float) -> KernelSpec:
    c = eps * f.array
    c[0] += 1.0
    return cosine_series(tuple(c))


@dataclass(frozen=True)
class ProbeReport:
    alpha: float
    direction: EvenPerturbation
    eps_grid: tuple
    J_values: tuple
    one_sided_slope: float
    J0: float = 0.0
    margin: float = 0.0
    predicted_slope: float = 0.0
    seed: int | None = None
    certified: tuple = field(default=())

    @property
    def ok(self) -> bool:
        return self.one_sided_slope >= -SLOPE_TOL

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "seed": self.seed,
            "direction": self.direction.to_list(),
            "eps_grid": list(self.eps_grid),
            "J_values": list(self.J_values),
            "J0": self.J0,
            "one_sided_slope": self.one_sided_slope,
            "predicted_slope": self.predicted_slope,
            "lemma_margin": self.margin,
            "certified": list(self.certified),
            "ok": self.ok,
        }


def probe_direction(
    alpha: float, f: EvenPerturbation, eps_grid=DEFAULT_EPS_GRID, beta: float = 1.0, seed: int | None = None
) -> ProbeReport:
    """J(indicator + eps f) on ``eps_grid`` and the slope at the smallest eps.

    The first-order expansion gives slope = alpha pi J0 * margin, where
    margin is the stability-inequality margin of f; it is reported alongside.
    """
    grid = tuple(float(e) for e in eps_grid)
    if not grid or any(b <= a for a, b in zip(grid[:-1], grid[1:])):
        raise ValueError("eps grid must be strictly increasing")
    if grid[0] < 1e-6 or grid[-1] > 0.1:
        raise ValueError("eps grid must lie in [1e-6, 0.1]")
    J0 = uncertainty(cosine_series((1.0,)), alpha, beta).J
    values, cert = [], []
    for e in grid:
        rep = uncertainty(perturbed_indicator(f, e), alpha, beta)
        values.append(float(rep.J))
        cert.append(bool(rep.certified))
    slope = (values[0] - J0) / grid[0]
    margin = stability_verify(f, alpha).margin
    predicted = alpha * math.pi * J0 * margin
    return ProbeReport(float(alpha), f, grid, tuple(values), slope, J0, margin, predicted, seed, tuple(cert))


def probe_local_min(
    alpha: float,
    N: int = 100,
    eps_grid=DEFAULT_EPS_GRID,
    seed: int = 0,
    dim: int = PERTURBATION_DIM,
    workers: int = 1,
) -> list[ProbeReport]:
    """Probe ``N`` seeded random unit directions; direction i uses seed + i."""
    if N < 1:
        raise ValueError("N must be >= 1")

    def one(i):
        s = seed + i
        return probe_direction(alpha, EvenPerturbation.from_seed(s, dim), eps_grid, seed=s)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, range(N)))
    return [one(i) for i in range(N)]

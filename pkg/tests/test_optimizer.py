import math

import numpy as np
import pytest

from fourier_uncertainty.functional import uncertainty
from fourier_uncertainty.kernel import builtin_kernels, characteristic, cosine_series, power
from fourier_uncertainty.optimizer import (
    minimize,
    perturbed_indicator,
    probe_direction,
    probe_local_min,
    project_start,
)
from fourier_uncertainty.whittaker import EvenPerturbation, stability_verify

J_CHAR2 = 1 / (12 * math.pi**2)


def test_amplitude_only_search_stays_put():
    r = minimize(2, 1, dim=0, start="characteristic", max_iter=50)
    assert r.J == pytest.approx(J_CHAR2, rel=1e-12)


@pytest.mark.slow
def test_no_improvement_near_indicator():
    r = minimize(2, 1, dim=6, start="characteristic", max_iter=500)
    assert r.J >= J_CHAR2 * (1 - 1e-4)
    assert all(b <= a for a, b in zip(r.trace, r.trace[1:]))


@pytest.mark.slow
def test_random_start_reaches_builtin_level():
    best = min(uncertainty(k, 2, 1).J for k in builtin_kernels().values())
    r = minimize(2, 1, dim=6, start="random", max_iter=500, seed=3)
    assert r.J <= best * 1.05
    assert all(b <= a for a, b in zip(r.trace, r.trace[1:]))


def test_nonnegativity_penalty():
    r = minimize(2, 1, dim=3, start="random", max_iter=150, seed=1, nonnegative=True)
    assert r.negativity <= 1e-6


def test_deterministic():
    a = minimize(2, 1, dim=2, start="random", max_iter=40, seed=9)
    b = minimize(2, 1, dim=2, start="random", max_iter=40, seed=9)
    assert a.trace == b.trace and a.kernel == b.kernel


def test_project_start():
    assert np.array_equal(project_start("characteristic", 2), [1.0, 0.0, 0.0])
    c = project_start(power(2), 4)
    # 1 - 4x^2 = 2/3 + sum_m 4 (-1)^(m+1) / (pi m)^2 cos(2 pi m x)
    expect = [2 / 3] + [4 * (-1) ** (m + 1) / (math.pi * m) ** 2 for m in range(1, 5)]
    assert np.allclose(c, expect, atol=1e-6)
    assert np.array_equal(project_start(cosine_series([1, 2, 3]), 1), [1.0, 2.0])
    with pytest.raises(ValueError):
        project_start("triangle", 2)


def test_constant_direction_is_neutral():
    r = probe_direction(2, EvenPerturbation((1.0,)))
    assert abs(r.one_sided_slope) <= 1e-7


def test_cosine_direction_nonnegative():
    r = probe_direction(2, EvenPerturbation((0.0, 1.0)), (1e-3,))
    assert r.one_sided_slope >= 0
    assert all(r.certified)


def test_slope_matches_first_order_prediction():
    for seed in range(5):
        f = EvenPerturbation.from_seed(seed)
        r = probe_direction(4, f, (1e-5, 1e-4))
        assert r.predicted_slope == pytest.approx(4 * math.pi * r.J0 * stability_verify(f, 4).margin)
        assert r.one_sided_slope == pytest.approx(r.predicted_slope, rel=1e-2, abs=1e-7)


def test_probe_alpha3_seed7_subset():
    reps = probe_local_min(3, 10, seed=7)
    assert all(r.one_sided_slope >= -1e-6 for r in reps)
    assert [r.seed for r in reps] == list(range(7, 17))


def test_probe_sign_agrees_with_lemma_margin():
    for r in probe_local_min(2, 20, seed=100, workers=2):
        if abs(r.one_sided_slope) > 1e-7:
            assert (r.one_sided_slope >= 0) == (r.margin >= 0)


def test_eps_grid_validation():
    f = EvenPerturbation((0.0, 1.0))
    with pytest.raises(ValueError):
        probe_direction(2, f, (1e-3, 1e-4))
    with pytest.raises(ValueError):
        probe_direction(2, f, (1e-7,))
    with pytest.raises(ValueError):
        probe_direction(2, f, (0.5,))


def test_perturbed_indicator():
    k = perturbed_indicator(EvenPerturbation((0.5, 1.0)), 0.1)
    assert k.params == (1.05, 0.1)

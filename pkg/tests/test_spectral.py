import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from fourier_uncertainty.kernel import (
    ScaleTransform,
    apply_scale,
    builtin_kernels,
    characteristic,
    cosine_series,
    evaluate,
    from_function,
    gaussian,
    l1_norm,
    power,
)
from fourier_uncertainty.spectral import (
    CERTIFIED,
    UNBOUNDED_RISK,
    PreconditionError,
    fourier,
    fourier_derivative,
    plancherel_check,
    weighted_sup,
)

NONNEG = list(builtin_kernels().values())


def cosine_transform(k, xi):
    R = 8.0 if math.isinf(k.support_radius) else k.support_radius
    n = max(50, int(8 * xi * R))
    return 2 * quad(lambda x: evaluate(k, x) * math.cos(2 * math.pi * xi * x), 0, R, limit=4 * n, epsabs=1e-14)[0]


def test_examples():
    assert fourier(characteristic(), 0.5) == pytest.approx(2 / math.pi, rel=1e-15)
    assert fourier(characteristic(), 0.0) == 1.0
    assert fourier(power(2), 1.0) == pytest.approx(2 / math.pi**2, rel=1e-13)


@pytest.mark.parametrize("k", NONNEG + [cosine_series([1, 0.3, -0.2])], ids=lambda k: k.family + str(k.params))
def test_value_at_zero_is_mass(k):
    assert fourier(k, 0.0) == pytest.approx(l1_norm(k), rel=1e-10)


@pytest.mark.parametrize("k", NONNEG, ids=lambda k: k.family + str(k.params))
def test_transform_bounded_by_mass(k):
    xi = np.linspace(0, 100, 10_000)
    assert np.all(np.abs(fourier(k, xi)) <= l1_norm(k) * (1 + 1e-12))


@pytest.mark.parametrize("k", [characteristic(), power(2), power(1), power(3.5), gaussian(), cosine_series([1, 0.5, 0.25])])
@pytest.mark.parametrize("xi", [0.1, 0.5, 1.7, 12.3, 49.9])
def test_against_quadrature(k, xi):
    assert fourier(k, xi) == pytest.approx(cosine_transform(k, xi), abs=1e-11)


def test_derivative_matches_finite_difference():
    x = np.linspace(0.05, 6, 23)
    h = 1e-6
    for k in (characteristic(), power(2), gaussian(), cosine_series([1, 0.3, -0.2])):
        fd = (fourier(k, x + h) - fourier(k, x - h)) / (2 * h)
        assert np.allclose(fourier_derivative(k, x), fd, atol=1e-8)
    assert fourier_derivative(power(3), x) is None


def test_sup_characteristic():
    r = weighted_sup(characteristic(), 1.0)
    assert r.value == pytest.approx(1 / math.pi, abs=1e-12)
    assert r.argmax_xi == pytest.approx(0.5, abs=1e-9)
    assert r.status == CERTIFIED
    assert r.tail_bound <= r.value * (1 + 1e-9)


def test_sup_gaussian():
    r = weighted_sup(gaussian(), 1.0)
    assert r.value == pytest.approx((2 * math.pi * math.e) ** -0.5, rel=1e-12)
    assert r.argmax_xi == pytest.approx((2 * math.pi) ** -0.5, rel=1e-9)
    assert r.certified


def test_sup_scaled_amplitude():
    r = weighted_sup(apply_scale(characteristic(), ScaleTransform(2, 1)), 1.0)
    assert r.value == pytest.approx(2 / math.pi, rel=1e-12)


def test_sup_value_is_attained():
    for k in (power(2), cosine_series([1, 0.2, -0.1, 0.05])):
        r = weighted_sup(k, 1.0)
        if math.isfinite(r.argmax_xi):
            assert r.value == pytest.approx(r.argmax_xi * abs(fourier(k, r.argmax_xi)), rel=1e-12)


def test_sup_against_dense_grid():
    k = cosine_series([1, 0.3, -0.2, 0.1])
    xi = np.linspace(0, 200, 400_001)
    dense = np.max(xi * np.abs(fourier(k, xi)))
    r = weighted_sup(k, 1.0)
    assert r.value >= dense * (1 - 1e-12)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(NONNEG), st.floats(0.1, 10), st.floats(0.1, 10))
def test_sup_scaling_law(k, c, L):
    base = weighted_sup(k, 1.0).value
    scaled = weighted_sup(apply_scale(k, ScaleTransform(c, L)), 1.0).value
    assert scaled == pytest.approx(c * base, rel=1e-8)


@pytest.mark.parametrize("beta", [0.75, 1.5])
def test_sup_scaling_law_general_beta(beta):
    base = weighted_sup(gaussian(), beta).value
    scaled = weighted_sup(apply_scale(gaussian(), ScaleTransform(3.0, 0.4)), beta).value
    assert scaled == pytest.approx(3.0 * 0.4 ** (1 - beta) * base, rel=1e-8)


def test_beta_precondition():
    with pytest.raises(PreconditionError):
        weighted_sup(characteristic(), 0.5)


def test_jump_kernel_beta_above_one_is_flagged():
    r = weighted_sup(characteristic(), 1.5)
    assert r.status == UNBOUNDED_RISK
    assert not r.certified


def test_smooth_kernel_beta_above_one_certified():
    assert weighted_sup(gaussian(), 2.0).certified


def test_sampled_kernel_sup_close():
    k = from_function(lambda x: 1 - 4 * x**2, 0.5)
    assert weighted_sup(k, 1.0).value == pytest.approx(weighted_sup(power(2), 1.0).value, rel=1e-5)


@pytest.mark.parametrize(
    "f,g,real",
    [
        (characteristic(), characteristic(), 1.0),
        (power(2), characteristic(), 2 / 3),
        (power(2), power(2), 8 / 15),
    ],
)
def test_plancherel(f, g, real):
    pair = plancherel_check(f, g, 200.0)
    assert pair.real_space == pytest.approx(real, rel=1e-12)
    assert abs(pair.spectral - pair.real_space) <= pair.tail_bound + 1e-9

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from fourier_uncertainty.kernel import (
    KernelError,
    KernelSpec,
    ScaleTransform,
    apply_scale,
    builtin_kernels,
    characteristic,
    cosine_series,
    evaluate,
    from_function,
    gaussian,
    l1_norm,
    moment,
    negativity_mass,
    parse_kernel,
    power,
    total_variation,
)

ALL = list(builtin_kernels().values()) + [cosine_series([1.0, 0.4, -0.3, 0.1])]


def test_pointwise_values():
    assert evaluate(characteristic(), 0.25) == 1.0
    assert evaluate(power(2), 0.5) == 0.0
    assert evaluate(gaussian(), 0.0) == 1.0
    assert evaluate(characteristic(), 0.51) == 0.0
    assert evaluate(cosine_series([1.0, 1.0]), 0.7) == 0.0


@pytest.mark.parametrize("k", ALL, ids=lambda k: k.family)
def test_even(k):
    x = np.random.default_rng(0).uniform(-2, 2, 1000)
    assert np.array_equal(evaluate(k, x), evaluate(k, -x))


def test_l1_closed_forms():
    assert l1_norm(characteristic()) == 1.0
    assert l1_norm(gaussian()) == pytest.approx(1.0, rel=1e-15)
    assert l1_norm(power(2)) == pytest.approx(2 / 3, rel=1e-15)


@pytest.mark.parametrize("a", [1, 2, 3, 4, 5, 6])
def test_power_family_mass(a):
    assert l1_norm(power(a)) == pytest.approx(a / (a + 1), rel=1e-10)


def test_moments():
    assert moment(characteristic(), 2) == pytest.approx(1 / 12, rel=1e-15)
    assert moment(characteristic(), 1) == pytest.approx(0.25, rel=1e-15)
    assert moment(gaussian(), 2) == pytest.approx(1 / (2 * math.pi), rel=1e-14)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 3.3])
@pytest.mark.parametrize("k", ALL, ids=lambda k: k.family)
def test_moment_and_l1_against_quadrature(k, alpha):
    R = 8.0 if math.isinf(k.support_radius) else k.support_radius
    f = lambda x: abs(evaluate(k, x))
    ref_l1 = 2 * quad(f, 0, R, limit=400, epsabs=1e-14, epsrel=1e-13)[0]
    ref_m = 2 * quad(lambda x: x**alpha * f(x), 0, R, limit=400, epsabs=1e-14, epsrel=1e-13)[0]
    assert l1_norm(k) == pytest.approx(ref_l1, rel=1e-10)
    assert moment(k, alpha) == pytest.approx(ref_m, rel=1e-9)


def test_sign_changing_cosine_series_l1():
    k = cosine_series([0.2, 1.0])
    r = math.acos(-0.2) / (2 * math.pi)
    ref = quad(lambda x: abs(0.2 + math.cos(2 * math.pi * x)), -0.5, 0.5, points=[-r, r], limit=200, epsabs=1e-14)[0]
    assert l1_norm(k) == pytest.approx(ref, rel=1e-12)
    assert negativity_mass(k) > 0


def test_scale_examples():
    assert apply_scale(characteristic(), ScaleTransform(1, 1)) == characteristic()
    assert l1_norm(apply_scale(characteristic(), ScaleTransform(2, 3))) == pytest.approx(6.0, rel=1e-15)
    assert moment(apply_scale(power(2), ScaleTransform(1, 2)), 2) == pytest.approx(8 * moment(power(2), 2), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(ALL),
    st.floats(0.1, 10.0),
    st.floats(0.1, 10.0),
    st.floats(0.5, 6.0),
)
def test_scaling_laws(k, c, L, alpha):
    v = apply_scale(k, ScaleTransform(c, L))
    assert l1_norm(v) == pytest.approx(c * L * l1_norm(k), rel=1e-10)
    assert moment(v, alpha) == pytest.approx(c * L ** (alpha + 1) * moment(k, alpha), rel=1e-10)


def test_scale_transform_validation():
    with pytest.raises(KernelError):
        ScaleTransform(0.0, 1.0)
    with pytest.raises(KernelError):
        ScaleTransform(1.0, -2.0)


def test_spec_validation():
    with pytest.raises(KernelError):
        KernelSpec("triangle")
    with pytest.raises(KernelError):
        KernelSpec("characteristic", (1.0,), math.inf)
    with pytest.raises(KernelError):
        KernelSpec("gaussian", (1.0, 1.0), 0.5)
    with pytest.raises(KernelError):
        KernelSpec("power", (-1.0,))
    with pytest.raises(KernelError):
        cosine_series([0.0, 1.0], nonnegative=True)


def test_json_round_trip(tmp_path):
    for k in ALL:
        d = json.loads(k.to_json())
        assert set(d) == {"family", "params", "support_radius", "nonnegative"}
        assert KernelSpec.from_dict(d) == k
    p = tmp_path / "k.json"
    p.write_text(power(3).to_json())
    assert parse_kernel(str(p)) == power(3)


def test_parse_forms():
    assert parse_kernel("characteristic") == characteristic()
    assert parse_kernel("power:2") == power(2)
    assert parse_kernel("power(2.5)") == power(2.5)
    assert parse_kernel('{"family": "cosine_series", "params": [1, 0.5]}') == cosine_series([1, 0.5])
    assert parse_kernel('{"family": "gaussian", "params": [1, 2], "support_radius": "inf"}').width == 2.0
    with pytest.raises(KernelError):
        parse_kernel("power")
    with pytest.raises(KernelError):
        parse_kernel("boxcar")


def test_sampled_fallback_close_to_analytic():
    k = from_function(lambda x: 1 - 4 * x**2, 0.5)
    assert l1_norm(k) == pytest.approx(2 / 3, rel=1e-7)
    assert moment(k, 2) == pytest.approx(1 / 30, rel=1e-6)


def test_total_variation():
    assert total_variation(characteristic()) == pytest.approx(2.0)
    assert total_variation(power(2)) == pytest.approx(2.0)
    assert total_variation(gaussian()) == pytest.approx(2.0)

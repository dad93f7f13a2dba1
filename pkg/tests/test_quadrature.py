import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourier_uncertainty.quadrature import (
    QuadratureError,
    adaptive_gauss_legendre,
    golden_maximize,
    integrate,
    oscillation_panels,
)


def test_polynomial_exact():
    # 8-point rule integrates degree 15 exactly
    res = adaptive_gauss_legendre(lambda x: x**15 + 3 * x**2, 0.0, 2.0)
    assert res.converged
    assert res.value == pytest.approx(2**16 / 16 + 8, rel=1e-14)


def test_reversed_interval_flips_sign():
    assert integrate(np.exp, 1.0, 0.0) == pytest.approx(-(math.e - 1), rel=1e-14)


def test_empty_interval():
    assert integrate(np.exp, 0.3, 0.3) == 0.0


def test_kink_with_breakpoint():
    assert integrate(np.abs, -1.0, 2.0, breakpoints=[0.0]) == pytest.approx(2.5, rel=1e-14)


def test_oscillatory_against_closed_form():
    w = 301.0
    val = integrate(lambda x: np.cos(w * x), 0.0, 1.0, panels=oscillation_panels(w, 0.0, 1.0))
    assert val == pytest.approx(math.sin(w) / w, abs=1e-13)


def test_oscillation_panels_counts_periods():
    assert oscillation_panels(0.0, 0, 1) == 1
    assert oscillation_panels(2 * math.pi * 10, 0, 1) == 80


def test_depth_limit_raises():
    with pytest.raises(QuadratureError) as info:
        integrate(lambda x: 1.0 / np.sqrt(np.abs(x - 0.3)), 0.0, 1.0, tol=1e-14, max_depth=3)
    assert info.value.achieved > 0


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 5.0), st.floats(0.0, 40.0))
def test_gaussian_cosine_matches_scipy(a, w):
    from scipy.integrate import quad

    f = lambda x: np.exp(-a * x * x) * np.cos(w * x)
    ref = quad(lambda x: math.exp(-a * x * x) * math.cos(w * x), -2, 2, limit=500, epsabs=1e-14)[0]
    got = integrate(f, -2.0, 2.0, tol=1e-13, panels=oscillation_panels(w, -2, 2))
    assert got == pytest.approx(ref, abs=1e-11)


def test_golden_vectorised():
    x, v = golden_maximize(lambda t: -(t - np.array([0.2, 3.3])) ** 2, [0.0, 3.0], [1.0, 4.0])
    assert np.allclose(x, [0.2, 3.3], atol=1e-8)
    assert np.all(v <= 0) and np.all(v > -1e-15)


def test_golden_sinc_peak():
    x, v = golden_maximize(lambda t: np.abs(np.sin(np.pi * t)) / np.pi, np.array([0.3]), np.array([0.8]))
    assert v[0] == pytest.approx(1 / math.pi, rel=1e-15)

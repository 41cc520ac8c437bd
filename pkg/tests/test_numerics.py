import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gamowpair.errors import NonConvergence, NonFiniteValue, StateBlowup, TruncationWarning
from gamowpair.numerics import (GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, PowerSeries,
                                QuadratureSpec, RayContour, adaptive_quad, ode_integrate,
                                ray_quad, series_reciprocal_sinh_ratio, sinhc_series)


def test_gk15_weights_integrate_polynomials_exactly():
    # Kronrod rule is exact through degree 22, the embedded Gauss rule through 13
    assert math.isclose(math.fsum(KRONROD_WEIGHTS), 2.0, abs_tol=1e-15)
    for k in range(23):
        exact = 2.0 / (k + 1) if k % 2 == 0 else 0.0
        assert abs(float(KRONROD_WEIGHTS @ NODES ** k) - exact) < 1e-14, k
        if k <= 13:
            assert abs(float(GAUSS_WEIGHTS @ NODES ** k) - exact) < 1e-14, k


def test_quadrature_examples():
    assert adaptive_quad(lambda x: x * x, (0.0, 1.0)) == pytest.approx(1 / 3, rel=1e-14)
    assert abs(adaptive_quad(np.exp, (-50.0, 0.0)) - (1 - math.exp(-50))) < 1e-12
    half_disc = adaptive_quad(lambda t: np.sqrt(np.clip(1 - t * t, 0, None)), (-1.0, 1.0))
    assert half_disc == pytest.approx(math.pi / 2, rel=1e-9)


def test_real_integrand_gives_float_complex_gives_complex():
    assert isinstance(adaptive_quad(np.cos, (0.0, 1.0)), float)
    z = adaptive_quad(lambda x: np.exp(1j * x), (0.0, math.pi))
    assert isinstance(z, complex)
    assert abs(z - 2j) < 1e-13


def test_full_output_reports_error_within_contract():
    spec = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-14)
    value, err = adaptive_quad(np.sin, (0.0, 3.0), spec, full_output=True)
    assert err <= max(spec.abs_tol, spec.rel_tol * abs(value))
    assert abs(value - (1 - math.cos(3.0))) < 1e-12


def test_nonconvergence_on_exhausted_budget():
    spec = QuadratureSpec(rel_tol=1e-15, abs_tol=1e-300, max_subdivisions=3)
    with pytest.raises(NonConvergence):
        adaptive_quad(lambda x: np.sin(50 * x) / (x + 1e-3), (0.0, 10.0), spec)


def test_nonfinite_integrand_raises():
    with pytest.raises(NonFiniteValue):
        adaptive_quad(lambda x: np.full_like(x, np.nan), (0.0, 1.0))


@pytest.mark.parametrize("kwargs", [dict(rel_tol=0), dict(abs_tol=-1), dict(max_subdivisions=0)])
def test_quadrature_spec_validation(kwargs):
    with pytest.raises(ValueError):
        QuadratureSpec(**kwargs)


@pytest.mark.parametrize("angle", [-math.pi / 2, math.pi / 2, 2.0])
def test_ray_contour_rejects_imaginary_axis(angle):
    with pytest.raises(ValueError):
        RayContour(angle, 1.0)


def test_ray_examples():
    # the damped direction for exp(i s) is the upper half plane
    up = ray_quad(lambda z: np.exp(1j * z), RayContour(math.pi / 4, 60.0))
    assert abs(up - 1j) < 1e-12
    with pytest.warns(TruncationWarning):
        flat = ray_quad(lambda z: np.ones_like(z), RayContour(0.0, 2.0))
    assert flat == pytest.approx(2.0)
    quartic = ray_quad(lambda z: z * np.exp(-1j * z), RayContour(-math.pi / 4, 80.0))
    assert abs(quartic + 1.0) < 1e-11


def test_ray_truncation_warning():
    with pytest.warns(TruncationWarning):
        ray_quad(lambda z: np.exp(-1j * z), RayContour(-math.pi / 4, 1.0))


@settings(max_examples=25, deadline=None)
@given(st.floats(-1.4, -0.1), st.floats(-1.4, -0.1))
def test_ray_consistency_across_angles(t1, t2):
    spec = QuadratureSpec(rel_tol=1e-11, abs_tol=1e-14)

    def f(z):
        return z * z * np.exp(-1j * z)

    def run(t):
        return ray_quad(f, RayContour(t, 60.0 / math.sin(-t)), spec)

    a, b = run(t1), run(t2)
    # int_0^inf s^2 exp(-i s) ds = 2/(i)^3 = 2i
    assert abs(a - b) <= 10 * 1e-11 * abs(a) + 1e-13
    assert abs(a - 2j) < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=8),
       st.lists(st.floats(-5, 5), min_size=1, max_size=8),
       st.floats(-3, 3), st.floats(-3, 3))
def test_quadrature_linearity(cf, cg, alpha, beta):
    f = np.polynomial.Polynomial(cf)
    g = np.polynomial.Polynomial(cg)
    spec = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-12)
    lhs = adaptive_quad(lambda x: alpha * f(x) + beta * g(x), (-1.0, 2.0), spec)
    rhs = alpha * adaptive_quad(f, (-1.0, 2.0), spec) + beta * adaptive_quad(g, (-1.0, 2.0), spec)
    scale = 1.0 + abs(alpha) * sum(map(abs, cf)) * 8 + abs(beta) * sum(map(abs, cg)) * 8
    assert abs(lhs - rhs) <= 1e-11 * scale


def test_series_coefficients():
    s = series_reciprocal_sinh_ratio(8)
    assert s.order == 8
    assert s[0] == 1.0
    assert s[2] == pytest.approx(-1 / 6, rel=1e-15)
    assert s[4] == pytest.approx(7 / 360, rel=1e-15)
    assert s[6] == pytest.approx(-31 / 15120, rel=1e-14)
    assert all(s[k] == 0.0 for k in (1, 3, 5, 7))
    assert series_reciprocal_sinh_ratio(0)[0] == 1.0


@pytest.mark.parametrize("order", [0, 2, 5, 16, 24])
def test_series_times_sinhc_is_one(order):
    prod = series_reciprocal_sinh_ratio(order) * sinhc_series(order)
    assert prod.order == order
    assert prod[0] == pytest.approx(1.0, abs=1e-15)
    assert all(abs(prod[k]) < 1e-15 for k in range(1, order + 1))


def test_series_matches_function():
    s = series_reciprocal_sinh_ratio(24)
    for x in (0.05, 0.2, 0.5):
        assert s(x) == pytest.approx(x / math.sinh(x), rel=1e-15)


def test_power_series_truncates_consistently():
    p = PowerSeries((1.0, 1.0))
    sq = p * p
    assert sq.order == 1 and tuple(sq.coefficients) == (1.0, 2.0)
    with pytest.raises(ValueError):
        PowerSeries(())


def test_ode_exponential():
    path = ode_integrate(lambda s, y: y, np.array([1.0]), (0.0, 1.0), 1e-3)
    assert path[0][0] == 0.0 and path[-1][0] == 1.0
    assert abs(path[-1][1][0] - math.e) < 1e-10


def test_ode_constant_and_harmonic():
    path = ode_integrate(lambda s, y: np.zeros(1), np.array([5.0]), (0.0, 2.0), 0.1)
    assert all(y[0] == 5.0 for _, y in path)
    path = ode_integrate(lambda s, y: np.array([y[1], -y[0]]), np.array([1.0, 0.0]),
                         (0.0, math.pi), 1e-3)
    assert np.allclose(path[-1][1], [-1.0, 0.0], atol=1e-8)


def test_ode_fourth_order():
    def err(h):
        return abs(ode_integrate(lambda s, y: y, np.array([1.0]), (0.0, 1.0), h)[-1][1][0] - math.e)

    ratio = err(0.1) / err(0.05)
    assert 12 <= ratio <= 20


def test_ode_blowup():
    with pytest.raises(StateBlowup):
        ode_integrate(lambda s, y: y * y, np.array([1.0]), (0.0, 2.0), 1e-3)

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _support import PAPER, params_st
from quadescape import (OnCut, PoleAtZero, W_eval, chebyshev_T, chebyshev_T_prime,
                        gluing_context, in_G, special_points, validate_params, w_eval,
                        w_prime)
from quadescape.kernel import hyperbola_xy


def _contour(p, n=100):
    yp = special_points(p).y_plus
    y = yp + np.logspace(-4, 3, n) * max(1.0, abs(yp))
    return hyperbola_xy(y, p)[0]


def _points_in_G(p, rng, n):
    """Random points of G: right of the hyperbola, away from 0."""
    pts = []
    while len(pts) < n:
        x = complex(rng.uniform(-3, 6), rng.uniform(-6, 6))
        if abs(x) > 0.1 and in_G(x - 0.1, p):
            pts.append(x)
    return np.array(pts)


@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_T2_is_classical(z):
    if z.imag == 0 and z.real <= -1:
        z += 1e-3j
    assert abs(chebyshev_T(2, z) - (2 * z * z - 1)) <= 1e-12 * (1 + abs(z) ** 2)


@given(st.floats(0.05, 20))
def test_T_at_one(a):
    assert chebyshev_T(a, 1.0) == pytest.approx(1.0, abs=1e-15)


def test_T_half_at_zero():
    assert chebyshev_T(0.5, 0.0) == pytest.approx(math.sqrt(2) / 2, abs=1e-15)


@pytest.mark.parametrize("a", [0.5, 1, 1.7, 2, 3])
def test_T_on_cosines(a):
    t = np.linspace(1e-3, math.pi - 1e-3, 200)
    assert np.max(np.abs(chebyshev_T(a, np.cos(t)) - np.cos(a * t))) <= 1e-12


@pytest.mark.parametrize("z", [-1.0, -2.5, -1e6])
def test_T_on_cut(z):
    with pytest.raises(OnCut):
        chebyshev_T(1.3, z)
    with pytest.raises(OnCut):
        chebyshev_T(1.3, np.array([0.2, z]))


@given(st.floats(0.3, 5), st.floats(-4, 4), st.floats(-4, 4))
def test_T_prime_finite_difference(a, zr, zi):
    z = complex(zr, zi)
    if abs(zi) < 0.05 and zr < -0.9:
        return
    h = 1e-6
    fd = (chebyshev_T(a, z + h) - chebyshev_T(a, z - h)) / (2 * h)
    d = chebyshev_T_prime(a, z)
    assert abs(fd - d) <= 1e-6 * (1 + abs(d))


def test_T_prime_limit_at_one():
    assert chebyshev_T_prime(1.7, 1.0) == pytest.approx(1.7 ** 2, rel=1e-12)


@pytest.mark.parametrize("z", [1e30, 1e30 + 3e29j, -1e20 + 1e25j])
def test_T_dominant_term(z):
    # the subdominant term is below double precision here
    a = 2.3
    ref = 0.5 * (2 * z) ** a
    assert abs(chebyshev_T(a, z) / ref - 1) <= 1e-12


@given(params_st())
def test_affine_normalization(p):
    ctx = gluing_context(p)
    assert abs(ctx.z(ctx.x_minus) + 1) <= 1e-14
    assert abs(ctx.z(ctx.x_plus) - 1) <= 1e-14
    assert abs(w_eval(ctx.x_plus, ctx) - 1) <= 1e-14


def test_w_prime_finite_difference():
    p = validate_params(*PAPER)
    ctx = gluing_context(p)
    xs = _points_in_G(p, np.random.default_rng(7), 50)
    h = 1e-6
    for x in xs:
        fd = (w_eval(x + h, ctx) - w_eval(x - h, ctx)) / (2 * h)
        d = w_prime(x, ctx)
        assert abs(fd - d) <= 1e-7 * abs(d) + 1e-9


def test_cauchy_riemann():
    p = validate_params(*PAPER)
    ctx = gluing_context(p)
    h = 1e-5
    for x in _points_in_G(p, np.random.default_rng(3), 20):
        dx = (w_eval(x + h, ctx) - w_eval(x - h, ctx)) / (2 * h)
        dy = (w_eval(x + 1j * h, ctx) - w_eval(x - 1j * h, ctx)) / (2 * h)
        # analytic: d/dy = i d/dx
        assert abs(dy - 1j * dx) <= 1e-6 * (1 + abs(dx))


def test_rho_zero_is_polynomial():
    p = validate_params(1, 2, 0.0, 1.5, 3)
    ctx = gluing_context(p)
    assert ctx.a == pytest.approx(2.0, abs=1e-15)
    x = _contour(p)
    z = ctx.z(x)
    assert np.max(np.abs(ctx.w(x) - (2 * z * z - 1)) / (1 + np.abs(z) ** 2)) <= 1e-12
    W = ctx.W(x)
    assert np.max(np.abs(W - ctx.W(np.conj(x)))) <= 1e-12


def test_W_zero_at_vertex():
    p = validate_params(*PAPER)
    ctx = gluing_context(p)
    assert abs(W_eval(ctx.x_branch, ctx)) <= 1e-15
    assert ctx.w_at_0.imag == 0 and ctx.w_at_branch.imag == 0


@given(params_st())
def test_gluing_on_hyperbola(p):
    ctx = gluing_context(p)
    x = _contour(p)
    Wp, Wm = ctx.W(x), ctx.W(np.conj(x))
    assert np.max(np.abs(Wp - Wm) / (1 + np.abs(Wp))) <= 1e-9
    assert np.max(np.abs(Wp.imag) / (1 + np.abs(Wp))) <= 1e-9


@given(params_st())
def test_W_real_in_unit_interval_on_hyperbola(p):
    ctx = gluing_context(p)
    W = ctx.W(_contour(p)).real
    assert np.all(W >= -1e-9) and np.all(W <= 1 + 1e-9)


def test_W_bounded_at_infinity():
    p = validate_params(*PAPER)
    ctx = gluing_context(p)
    for ang in (-1.0, 0.0, 0.7):
        r = np.array([1e4, 1e6, 1e8])
        W = ctx.W(r * np.exp(1j * ang))
        assert np.all(np.isfinite(W))
        assert abs(W[2] - W[1]) <= abs(W[1] - W[0]) + 1e-12


def test_W_pole_at_zero():
    ctx = gluing_context(validate_params(*PAPER))
    with pytest.raises(PoleAtZero):
        ctx.W(0.0)

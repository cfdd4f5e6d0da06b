import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadescape import (AxisRegime, ClampWarning, InversionConfig, InversionUnstable,
                        QuadrantSolver, asymptotics, euler_invert, evaluate_asymptote,
                        fit_origin_exponent, fit_rate, special_points, validate_params,
                        wedge_geometry)
from quadescape.inversion import _clamp

# a set whose horizontal regime is the u**-3/2 branch-point row
BRANCH = (0.452, 0.669, -0.352, 3.779, 0.703)


@pytest.fixture(scope="module")
def product_bvp(product_ev, product):
    return QuadrantSolver(product, method="bvp", evaluators=product_ev)


@pytest.fixture(scope="module")
def paper_solver(paper, paper_ev):
    return QuadrantSolver(paper, evaluators=paper_ev)


# ---------------------------------------------------------------- Euler
@given(st.floats(0.1, 5), st.floats(0.05, 10))
def test_euler_exponential(a, t):
    v, err = euler_invert(lambda s: 1 / (s + a), t)
    assert abs(v[0] - math.exp(-a * t)) <= 1e-7
    assert err[0] <= 1e-6


@given(st.floats(0.05, 10))
def test_euler_ramp(t):
    v, _ = euler_invert(lambda s: 1 / s ** 2, t)
    assert v[0] == pytest.approx(t, rel=1e-7)


def test_euler_sine():
    t = np.linspace(0.1, 3, 12)
    v, _ = euler_invert(lambda s: 1 / (s * s + 1), t)
    assert np.max(np.abs(v - np.sin(t))) <= 1e-7


def test_config_validation():
    with pytest.raises(ValueError):
        InversionConfig(M=10)
    with pytest.raises(ValueError):
        InversionConfig(E=5)
    with pytest.raises(ValueError):
        InversionConfig(A=0)


# ---------------------------------------------------------------- axis
def test_product_at_one(product_bvp):
    assert abs(product_bvp.absorption_prob_axis(1.0) - 0.0907180) <= 1e-6
    assert abs(product_bvp.absorption_prob_axis(1.0) - math.exp(-2.4)) <= 1e-6


def test_product_grid(product_bvp):
    u = np.linspace(0.1, 5, 20)
    assert np.max(np.abs(product_bvp.absorption_prob_axis(u) - np.exp(-2.4 * u))) <= 1e-6
    assert np.max(np.abs(product_bvp.absorption_prob_axis(u, "v") - np.exp(-1.2 * u))) <= 1e-6


def test_auto_uses_closed_form(product):
    s = QuadrantSolver(product)
    assert s.closed_form
    assert s.absorption_prob_axis(1.0) == math.exp(-2.4)


def test_monotone_and_complementary(paper_solver):
    u = np.linspace(0.05, 8, 50)
    pa, pe = paper_solver.axis_probabilities(u)
    assert np.all(np.diff(pa) < 0)
    assert np.all(pa + pe == 1)
    # the vertical rate y2 ~ -4.1 reaches the absolute accuracy floor by v ~ 6
    pa_v, pe_v = paper_solver.axis_probabilities(u[u <= 4], "vertical")
    assert np.all(np.diff(pa_v) < 0)
    assert np.all(pa_v + pe_v == 1)


def test_limits(paper_solver):
    assert paper_solver.absorption_prob_axis(1e-3) >= 0.99
    assert paper_solver.absorption_prob_axis(1e2) <= 1e-3


def test_paper_rate_fit(paper_solver):
    u = np.linspace(2, 6, 9)
    pa = paper_solver.absorption_prob_axis(u)
    rate = fit_rate(u, pa)
    assert abs(rate / special_points(paper_solver.params).x1 - 1) <= 0.05


def test_bad_inputs(paper_solver):
    with pytest.raises(ValueError):
        paper_solver.absorption_prob_axis(0.0)
    with pytest.raises(ValueError):
        paper_solver.escape_prob_interior(1.0, 0.0)
    with pytest.raises(ValueError):
        paper_solver.absorption_prob_axis(1.0, "diagonal")
    with pytest.raises(ValueError):
        QuadrantSolver(paper_solver.params, method="series")


def test_unstable_inversion_raises(paper, paper_ev):
    s = QuadrantSolver(paper, InversionConfig(target_abs_tol=1e-300), evaluators=paper_ev)
    with pytest.raises(InversionUnstable):
        s.absorption_prob_axis(1.0)


def test_clamp_warns():
    cfg = InversionConfig()
    with pytest.warns(ClampWarning):
        out = _clamp(np.array([-1e-3, 0.5]), cfg, "p")
    assert out[0] == 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        _clamp(np.array([-1e-8, 1 + 1e-8]), cfg, "p")


# ---------------------------------------------------------------- interior
def test_interior_product_closed_form(product):
    s = QuadrantSolver(product)
    assert s.absorption_prob_interior(1, 1) == pytest.approx(0.0273237, abs=1e-7)


def test_interior_product_by_inversion(product_bvp):
    for u, v in ((1.0, 1.0), (0.3, 0.5), (2.0, 0.2)):
        pa, pe = product_bvp.interior_probabilities(u, v)
        assert abs(pa - math.exp(-2.4 * u - 1.2 * v)) <= 1e-6
        assert pa + pe == 1


@pytest.mark.parametrize("u", [0.5, 1.0, 2.0])
def test_interior_meets_axis(paper_solver, u):
    inner = paper_solver.escape_prob_interior(u, 1e-4)
    assert abs(inner - paper_solver.escape_prob_axis(u)) <= 5e-3


# ---------------------------------------------------------------- asymptotics
def test_paper_report(paper):
    r = asymptotics(paper)
    assert r.regime is AxisRegime.PoleX1
    assert r.rate == pytest.approx(-28 / 13.8, rel=1e-14)
    assert r.power == 0.0
    assert r.origin_exponent == pytest.approx(wedge_geometry(paper).alpha)
    assert asymptotics(paper, "vertical").rate == pytest.approx(-14 / 3.4, rel=1e-14)


def test_branch_report():
    p = validate_params(*BRANCH)
    r = asymptotics(p)
    assert r.regime is AxisRegime.BranchMinus32
    assert r.rate == special_points(p).x_minus
    assert r.power == -1.5
    # the hypothesis behind the branch rows fails here; the report says so
    assert not r.branch_point_in_S


def test_product_origin_exponent_is_one(product):
    r = asymptotics(product)
    assert r.origin_exponent == pytest.approx(1.0, abs=1e-12)
    u = np.logspace(-3, -2, 6)
    assert fit_origin_exponent(u, 1 - np.exp(-2.4 * u)) == pytest.approx(1.0, rel=1e-2)


def test_evaluate_asymptote_shape(paper):
    r = asymptotics(validate_params(*BRANCH))
    u = np.array([1.0, 4.0])
    assert np.allclose(evaluate_asymptote(u, r), u ** -1.5 * np.exp(r.rate * u))
    assert np.allclose(evaluate_asymptote(u, asymptotics(paper)), np.exp(-28 / 13.8 * u))


def test_report_serializable(paper):
    import json
    json.dumps(asymptotics(paper).as_dict())


def test_origin_exponent_paper(paper_solver):
    u = np.logspace(-3, -2, 6)
    ex = fit_origin_exponent(u, paper_solver.escape_prob_axis(u))
    assert abs(ex / paper_solver.asymptotics().origin_exponent - 1) <= 0.05

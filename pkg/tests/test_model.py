import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _support import PAPER, PRODUCT, params_st, random_params
from quadescape import (AxisRegime, CorrelationOutOfRange, DegenerateBoundaryCase,
                        NonPositiveDrift, NonPositiveReflection,
                        ReflectionProductBelowOne, chi_delta_residual, classify,
                        params_from_mapping, validate_params, wedge_geometry)

# 30-digit mpmath evaluation of the tangent definitions for (2, 3, -0.4, 2, 4)
PAPER_ANGLES = {
    "beta": 1.1592794807274085,
    "delta": 2.8923009893823514,
    "epsilon": 2.6213967678085233,
    "theta": 0.70982990141050932,
    "alpha": 2.0461891571760296,
}


def test_paper_params_valid():
    p = validate_params(*PAPER)
    assert (p.mu1, p.mu2, p.rho, p.r1, p.r2) == PAPER


def test_product_boundary_valid():
    validate_params(1, 1, 0, 1, 1)


@pytest.mark.parametrize("raw, exc, quantity", [
    ((1, 1, 0, 0.5, 1), ReflectionProductBelowOne, "r1*r2"),
    ((0, 1, 0, 1, 1), NonPositiveDrift, "mu1"),
    ((1, -1, 0, 1, 1), NonPositiveDrift, "mu2"),
    ((1, 1, 1.0, 1, 1), CorrelationOutOfRange, "rho"),
    ((1, 1, -1.2, 1, 1), CorrelationOutOfRange, "rho"),
    ((1, 1, 0, 0, 5), NonPositiveReflection, "r1"),
    ((1, 1, 0, 5, -1), NonPositiveReflection, "r2"),
    ((math.nan, 1, 0, 1, 1), NonPositiveDrift, "params"),
])
def test_rejections_name_the_constraint(raw, exc, quantity):
    with pytest.raises(exc) as info:
        validate_params(*raw)
    assert info.value.quantity == quantity
    assert isinstance(info.value, ValueError)


def test_params_from_mapping():
    m = dict(zip(("mu1", "mu2", "rho", "r1", "r2"), PAPER))
    assert params_from_mapping(m) == validate_params(*PAPER)


def test_swapped_is_involution():
    p = validate_params(*PAPER)
    assert p.swapped() == validate_params(3, 2, -0.4, 4, 2)
    assert p.swapped().swapped() == p


def test_paper_angles_against_mpmath():
    g = wedge_geometry(validate_params(*PAPER))
    for name, ref in PAPER_ANGLES.items():
        assert getattr(g, name) == pytest.approx(ref, abs=1e-12), name


def test_paper_angle_inequalities():
    g = wedge_geometry(validate_params(*PAPER))
    assert 2 * g.delta - g.theta == pytest.approx(5.075, abs=1e-3)
    assert 2 * g.delta - g.theta + g.beta == pytest.approx(6.234, abs=1e-3)
    assert g.epsilon + g.delta + g.beta == pytest.approx(6.673, abs=1e-3)


def test_rho_zero_gives_right_angle():
    g = wedge_geometry(validate_params(1, 2, 0.0, 1.5, 3))
    assert g.beta == math.pi / 2


def test_zero_denominator_gives_right_angle():
    # -r2 + cos(beta) = 0 when r2 = -rho
    g = wedge_geometry(validate_params(1, 1, -0.5, 4, 0.5))
    assert g.delta == pytest.approx(math.pi / 2, abs=1e-15)


def test_product_form_alpha_one():
    p = validate_params(*PRODUCT)
    g = wedge_geometry(p)
    assert g.delta + g.epsilon - g.beta == pytest.approx(math.pi, abs=1e-9)
    assert g.alpha == pytest.approx(1.0, abs=1e-9)
    c = classify(p, g)
    assert c.product_form


def test_classify_paper():
    c = classify(validate_params(*PAPER))
    assert (c.chi, c.kappa, c.d) == (0, 0, 0.0)
    assert c.pole_x1_in_S and not c.pole_x1_in_G
    assert c.axis_asymptotic_regime_h is AxisRegime.PoleX1
    assert not c.product_form
    assert c.degenerate == ()


def test_classify_kappa_minus_two():
    p = validate_params(3, 1, -0.8, 1, 5)
    g = wedge_geometry(p)
    assert 2 * g.delta - g.theta + g.beta > 2 * math.pi
    assert g.epsilon + g.delta + g.beta < 2 * math.pi
    c = classify(p, g)
    assert (c.chi, c.kappa) == (-1, -2)
    assert c.pole_x1_in_G


def test_degenerate_boundary_warns_and_takes_equality():
    # rho = 0, r1 = r2 = 1: epsilon + delta + beta = 2 pi exactly
    p = validate_params(1, 1, 0, 1, 1)
    with pytest.warns(DegenerateBoundaryCase):
        c = classify(p)
    assert "epsilon+delta+beta=2*pi" in c.degenerate
    assert c.kappa == c.chi


def test_equality_row_regime():
    mu1, mu2, rho = 0.452, 0.669, -0.352
    b = math.acos(-rho)
    t = math.atan2(math.sin(b), mu1 / mu2 + math.cos(b))
    r2 = math.cos(b) - math.sin(b) / math.tan((math.pi + t) / 2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        c = classify(validate_params(mu1, mu2, rho, 3.779, r2))
    assert c.axis_asymptotic_regime_h is AxisRegime.BranchMinus12


def test_chi_delta_identity_on_1e4_sets():
    rng = np.random.default_rng(2024)
    worst = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for p in random_params(rng, 10_000):
            g = wedge_geometry(p)
            worst = max(worst, abs(chi_delta_residual(g, classify(p, g))))
    assert worst <= 1e-9


@given(params_st())
def test_geometry_invariants(p):
    g = wedge_geometry(p)
    assert math.cos(g.beta) == pytest.approx(-p.rho, abs=1e-12)
    for a in (g.beta, g.delta, g.epsilon, g.theta):
        assert 0 < a < math.pi
    assert g.theta < g.beta < g.delta
    assert g.beta < g.epsilon
    assert g.alpha >= 1 - 1e-12


@given(params_st())
def test_tangent_definitions(p):
    g = wedge_geometry(p)
    sb, cb = math.sin(g.beta), math.cos(g.beta)
    for angle, r in ((g.delta, p.r2), (g.epsilon, p.r1)):
        den = -r + cb
        if abs(den) > 1e-8:
            assert math.tan(angle) * den == pytest.approx(sb, abs=1e-10)


@given(params_st())
def test_classify_invariants(p):
    g = wedge_geometry(p)
    c = classify(p, g)
    assert c.chi == (-1 if 2 * g.delta - g.theta + g.beta > 2 * math.pi else 0)
    expected = c.chi if g.epsilon + g.delta + g.beta >= 2 * math.pi else c.chi - 1
    assert c.kappa == expected
    assert c.pole_x1_in_G == (c.chi == -1)
    assert abs(chi_delta_residual(g, c)) <= 1e-9


@given(params_st())
def test_classify_is_pure(p):
    assert classify(p) == classify(p)


@given(params_st(), st.booleans())
def test_product_form_equivalence(p, make_product):
    if make_product:
        p = validate_params(p.mu1, p.mu2, p.rho, p.r1, 1.0 / p.r1)
    g = wedge_geometry(p)
    by_product = abs(p.r1 * p.r2 - 1) <= 1e-12
    by_angle = abs(g.delta + g.epsilon - g.beta - math.pi) <= 1e-9
    assert by_product == by_angle == classify(p, g).product_form


def test_as_dict_serializable():
    import json
    p = validate_params(*PAPER)
    json.dumps(classify(p).as_dict())
    json.dumps(wedge_geometry(p).as_dict())
    json.dumps(p.as_dict())

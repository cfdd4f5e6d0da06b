import math

import numpy as np
import pytest
from hypothesis import given, settings
from scipy.integrate import dblquad

from _support import KAPPA_M2, NON_PRODUCT, PAPER, POSITIVE_RHO, params_st
from quadescape import (DivisionNearZero, KernelZero, OutsideDomain, PoleAtX1,
                        PoleAtZero, G_eval, branch_Y, build_evaluators, classify,
                        in_G, kernel_eval, psi1_eval, psi2_eval, psi_eval,
                        special_points, validate_params, wedge_geometry)
from quadescape.crosscheck import (boundary_residual, continuation_residual,
                                   far_field_slope, residue_error)
from quadescape.kernel import hyperbola_xy


def _d_equals_pi_params():
    # 2 delta - theta + beta = 2 pi: k1 vanishes at the vertex of H
    mu1, mu2, rho = 1.0, 1.5, -0.3
    b = math.acos(-rho)
    t = math.atan2(math.sin(b), mu1 / mu2 + math.cos(b))
    r2 = math.cos(b) - math.sin(b) / math.tan(math.pi - (b - t) / 2)
    return validate_params(mu1, mu2, rho, 2.0, r2)


@pytest.fixture(scope="module")
def evs():
    return {prm: build_evaluators(validate_params(*prm)) for prm in NON_PRODUCT}


# ---------------------------------------------------------------- G
@given(params_st())
def test_G_times_conjugate_is_one(p):
    kd = special_points(p)
    y = kd.y_plus + np.logspace(-3, 3, 30)
    x, _ = hyperbola_xy(y, p)
    G = G_eval(x, p, y)
    Gc = G_eval(np.conj(x), p, y)
    assert np.max(np.abs(G * Gc - 1)) <= 1e-10
    assert np.max(np.abs(np.abs(G) - 1)) <= 1e-10


def test_G_one_at_vertex(paper):
    kd = special_points(paper)
    x, _ = hyperbola_xy(kd.y_plus, paper)
    assert abs(G_eval(x, paper, kd.y_plus) - 1) <= 1e-12


def test_G_minus_one_at_vertex_when_d_is_pi():
    p = _d_equals_pi_params()
    c = classify(p)
    assert c.d == math.pi
    kd = special_points(p)
    x, _ = hyperbola_xy(kd.y_plus, p)
    with pytest.raises(DivisionNearZero):
        G_eval(x, p, kd.y_plus)
    y = kd.y_plus + 1e-12
    x, _ = hyperbola_xy(y, p)
    assert abs(G_eval(x, p, y) + 1) <= 1e-5
    ev = build_evaluators(p)
    assert ev.psi1.contour.d == math.pi
    assert boundary_residual(p, ev) <= 1e-7


def test_G_equals_one_only_at_special_points(paper):
    kd = special_points(paper)
    y = kd.y_plus + np.logspace(-2, 4, 400)
    x, _ = hyperbola_xy(y, paper)
    dist = np.abs(G_eval(x, paper, y) - 1)
    # y~ is below y+ for these parameters, so G stays away from 1
    assert kd.y_tilde < kd.y_plus
    assert dist.min() > 1e-3


# ---------------------------------------------------------------- contour
@pytest.mark.parametrize("prm, kappa", [(PAPER, 0), (KAPPA_M2, -2), (POSITIVE_RHO, -1)])
def test_measured_index(evs, prm, kappa):
    c = evs[prm].psi1.contour
    assert c.kappa == kappa
    assert c.kappa == classify(validate_params(*prm)).kappa


@settings(max_examples=25)
@given(params_st())
def test_index_and_argument_variation(p):
    ev = build_evaluators(p)
    c = ev.psi1.contour
    cl = ev.psi1.classification
    assert c.kappa == cl.kappa
    assert abs(c.d_plus_Delta - cl.d_plus_Delta) <= 1e-6
    assert np.max(np.abs(np.diff(c.phi))) < math.pi
    assert np.all(np.diff(c.u) > 0)


@given(params_st())
def test_normalization_real_positive(p):
    ev = build_evaluators(p)
    n = ev.psi1.normalization
    assert n.real > 0
    assert abs(n.imag) <= 1e-8 * abs(n)


# ---------------------------------------------------------------- psi1
@pytest.mark.parametrize("prm", NON_PRODUCT)
def test_boundary_condition(evs, prm):
    assert boundary_residual(validate_params(*prm), evs[prm], 20) <= 1e-7


@pytest.mark.parametrize("prm", NON_PRODUCT)
def test_continuation_identity(evs, prm):
    assert continuation_residual(validate_params(*prm), evs[prm], 20) <= 1e-7


@settings(max_examples=20)
@given(params_st())
def test_boundary_and_continuation_random(p):
    ev = build_evaluators(p)
    assert boundary_residual(p, ev, 12) <= 1e-7
    assert continuation_residual(p, ev, 12) <= 1e-7


@pytest.mark.parametrize("prm", NON_PRODUCT)
@pytest.mark.parametrize("x", [1e-3, 1e-4])
def test_residue_at_zero(evs, prm, x):
    ev = evs[prm]
    assert residue_error(ev.psi1, x) <= 10
    assert residue_error(ev.psi2, x) <= 10


@pytest.mark.parametrize("prm", NON_PRODUCT)
def test_far_field(evs, prm):
    ev = evs[prm]
    assert abs(1e6 * psi1_eval(1e6, ev.psi1)) <= 1e-3
    alpha = wedge_geometry(validate_params(*prm)).alpha
    assert abs(far_field_slope(ev.psi1) / -(alpha + 1) - 1) <= 0.02


@given(params_st())
def test_real_positive_on_positive_axis(p):
    ev = build_evaluators(p)
    x = np.logspace(-3, 3, 25)
    v = ev.psi1.evaluate(x)
    assert np.all(v.real > 0)
    assert np.all(np.abs(v.imag) <= 1e-10 * np.abs(v))


def test_product_closed_form(product_ev):
    x = np.array([0.5, 1.0, 2.0])
    exact = 1 / x - 1 / (x + 2.4)
    assert np.max(np.abs(psi1_eval(x, product_ev.psi1) / exact - 1)) <= 1e-7
    assert abs(psi2_eval(1.0, product_ev.psi2) / (1 - 1 / 2.2) - 1) <= 1e-7
    assert residue_error(product_ev.psi2, 1e-3) <= 10


def test_product_bivariate_against_double_integral(product_ev):
    ref, _ = dblquad(lambda v, u: math.exp(-u - v) * (1 - math.exp(-2.4 * u - 1.2 * v)),
                     0, np.inf, 0, np.inf, epsabs=1e-12, epsrel=1e-12)
    assert abs(psi_eval(1.0, 1.0, product_ev) / ref - 1) <= 1e-5


def test_swap_symmetry(paper, paper_ev):
    other = build_evaluators(paper.swapped())
    y = np.array([0.3, 1.0, 4.0, 2.0 + 3.0j])
    a = psi2_eval(y, paper_ev.psi2)
    b = psi1_eval(y, other.psi1)
    assert np.max(np.abs(a / b - 1)) <= 1e-9


def test_outside_half_plane_continued(paper, paper_ev):
    # rho < 0: this point is right of the imaginary axis but left of H
    x = 1.0 + 20.0j
    assert not in_G(x, paper)
    Y = branch_Y(x, 1, paper)
    assert Y.real > 0
    _, k1, k2 = kernel_eval(x, Y, paper)
    lhs = paper_ev.psi1.evaluate(x)
    rhs = -k2 * paper_ev.psi2.evaluate(Y) / k1
    assert abs(lhs / rhs - 1) <= 1e-7


def test_errors(paper_ev):
    with pytest.raises(PoleAtZero):
        paper_ev.psi1.evaluate(0.0)
    with pytest.raises(OutsideDomain):
        paper_ev.psi1.evaluate(-3.0 + 0j)


def test_pole_at_x1():
    p = validate_params(*KAPPA_M2)
    ev = build_evaluators(p)
    with pytest.raises(PoleAtX1):
        ev.psi1.evaluate(special_points(p).x1)


def test_kernel_zero_in_bivariate(paper, paper_ev):
    x = 0.5 + 3.0j
    y = branch_Y(x, 1, paper)
    assert y.real > 0
    with pytest.raises(KernelZero):
        psi_eval(x, y, paper_ev)

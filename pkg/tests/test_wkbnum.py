import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from udfq import wkbnum as wk

FLAT = wk.flat_space()
RANK1 = wk.rank_one_space()
GAUSS = wk.SampledFunction.parse("gauss")
CFG = wk.QuadratureConfig(hbar=0.3, nodes=48)


def test_rank_one_phase_function():
    xs = np.linspace(-3, 3, 13)
    assert np.allclose(RANK1.phi(xs), np.sinh(xs))
    assert np.allclose(RANK1.phi_inv(RANK1.phi(xs)), xs)
    assert np.allclose(RANK1.dphi(xs), np.cosh(xs))
    assert np.allclose(RANK1.dphi_inv(np.sinh(xs)), 1 / np.cosh(xs))
    assert wk.get_space("flat").name == "flat"
    with pytest.raises(ValueError):
        wk.get_space("torus")


pts = st.tuples(st.floats(-2, 2), st.floats(-2, 2))


@given(pts, pts, pts)
@settings(max_examples=50, deadline=None)
def test_phase_is_cyclic_and_odd(x0, x1, x2):
    s = wk.wkb_phase(RANK1, x0, x1, x2)
    assert math.isclose(s, wk.wkb_phase(RANK1, x1, x2, x0), rel_tol=1e-9, abs_tol=1e-9)
    assert math.isclose(s, -wk.wkb_phase(RANK1, x0, x2, x1), rel_tol=1e-9, abs_tol=1e-9)


def test_phase_is_zero_on_degenerate_triangles():
    assert wk.wkb_phase(RANK1, (0.3, 1.0), (0.3, 1.0), (-0.5, 2.0)) == pytest.approx(0.0, abs=1e-12)


def test_amplitude_rank_one():
    assert wk.wkb_amplitude(RANK1, (1.0, 0.0), (0.0, 5.0)) == pytest.approx(math.cosh(1.0))


def test_phi_hbar_flat_limit():
    a = np.array([0.5, -1.0])
    assert np.allclose(wk.phi_hbar(RANK1, a, 1e-4), a, atol=1e-8)
    with pytest.raises(ValueError):
        wk.phi_hbar(RANK1, a, 0.0)


def test_fourier_of_gaussian():
    # ∫ exp(ikl) exp(-a^2 - l^2) dl = sqrt(pi) exp(-a^2 - k^2/4)
    a, k = np.array([0.0, 0.7]), np.array([1.5, -2.0])
    exact = math.sqrt(math.pi) * np.exp(-a ** 2 - k ** 2 / 4)
    assert np.allclose(wk.fourier_points(GAUSS, a, k, CFG), exact, atol=1e-12)


@pytest.mark.parametrize("x0", [(0.0, 0.0), (0.3, -0.2), (-0.5, 0.4)])
@pytest.mark.parametrize("hbar", [0.1, 0.3, 0.8])
def test_flat_gaussian_product_closed_form(x0, hbar):
    # Moyal product of Gaussians: g * g = exp(-2r^2 / (1 + hbar^2)) / (1 + hbar^2)
    r = wk.wkb_star(GAUSS, GAUSS, x0, hbar, CFG, FLAT)
    r2 = x0[0] ** 2 + x0[1] ** 2
    exact = math.exp(-2 * r2 / (1 + hbar ** 2)) / (1 + hbar ** 2)
    assert abs(r.value - exact) < 1e-9


def test_unit_is_exact():
    v = wk.SampledFunction.parse("exp(-(a-1/2)**2 - l**2)")
    one = wk.SampledFunction.parse("1")
    r = wk.wkb_star(one, v, (0.2, 0.1), 0.3, CFG, RANK1)
    assert r.value == pytest.approx(v.value((0.2, 0.1))) and r.error == 0.0


@pytest.mark.parametrize("alpha,beta", [(2, 1), (3 / 2, 5 / 4)])
def test_flat_gaussians_of_different_widths(alpha, beta):
    # exp(-alpha r^2) * exp(-beta r^2) = exp(-(alpha + beta) r^2 / D) / D with D = 1 + alpha beta hbar^2
    u = wk.SampledFunction.parse(f"exp(-{alpha}*(a**2+l**2))")
    v = wk.SampledFunction.parse(f"exp(-{beta}*(a**2+l**2))")
    x0, hbar = (0.2, -0.1), 0.4
    d = 1 + alpha * beta * hbar ** 2
    exact = math.exp(-(alpha + beta) * 0.05 / d) / d
    assert abs(wk.wkb_star(u, v, x0, hbar, wk.QuadratureConfig(nodes=64), FLAT).value - exact) < 1e-9


def test_rank_one_close_to_first_order():
    u = wk.SampledFunction.parse("exp(-(a-3/10)**2-l**2)")
    v = wk.SampledFunction.parse("exp(-a**2-(l-1/5)**2)")
    cfg = wk.QuadratureConfig(nodes=64)
    r = wk.wkb_star(u, v, (0.0, 0.0), 0.05, cfg, RANK1)
    assert r.error < 1e-8
    assert abs(r.value - wk.first_order(u, v, (0.0, 0.0), 0.05)) < 5e-3


def test_fourier_of_product_matches_direct_transform():
    u = wk.SampledFunction.parse("exp(-(a-3/10)**2-l**2)")
    v = wk.SampledFunction.parse("exp(-a**2-(l-1/5)**2)")
    cfg = wk.QuadratureConfig(nodes=64)
    a0, hbar = 0.1, 0.3
    ln, lw = wk.gl_nodes(60, 6.0)
    vals = np.array([wk.wkb_star(u, v, (a0, l), hbar, cfg, RANK1).value for l in ln])
    for k in (0.0, 1.0):
        direct = (vals * np.exp(1j * k * ln)) @ lw
        assert abs(direct - wk.fourier_of_product(u, v, a0, k, hbar, cfg, RANK1)) < 1e-9


def test_hilbert_product_flat_is_parseval():
    u = wk.SampledFunction.parse("exp(-(a-3/10)**2-l**2)")
    v = wk.SampledFunction.parse("(1+a*l)*exp(-a**2-l**2)")
    h = wk.hilbert_product(u, v, 0.2, CFG, FLAT)
    assert abs(h.value - 2 * math.pi * wk.l2_product(u, v, CFG)) < 1e-9


def test_input_validation():
    with pytest.raises(ValueError):
        wk.QuadratureConfig(nodes=8)
    with pytest.raises(ValueError):
        wk.SampledFunction.parse("exp(-x**2)")
    slow = wk.SampledFunction.parse("exp(-a**2)/(1+l**2)")
    with pytest.raises(ValueError):
        wk.wkb_star(slow, GAUSS, (0, 0), 0.2, CFG, FLAT)
    with pytest.raises(ValueError):
        wk.wkb_star(GAUSS, GAUSS, (0, 0), 0.0, CFG, FLAT)


def test_aliases_and_bracket():
    u = wk.SampledFunction.parse("q*p*gauss")
    assert u.expr == wk.A * wk.L * wk.GAUSS
    v = wk.SampledFunction.parse("exp(-(a-1)**2-l**2)")
    exact = complex(wk.poisson_bracket(u, v).subs({wk.A: 0.2, wk.L: 0.3}))
    assert abs(exact - wk.poisson_bracket_fd(u, v, (0.2, 0.3))) < 1e-7


def test_loglog_slope():
    hs = np.array([0.1, 0.2, 0.4])
    slope, resid = wk.loglog_slope(hs, 3 * hs ** 2)
    assert slope == pytest.approx(2.0) and resid < 1e-12


def test_asymptotic_check_needs_enough_hbars():
    with pytest.raises(ValueError):
        wk.asymptotic_check(GAUSS, GAUSS, (0, 0), [0.1, 0.2], CFG, FLAT)


def test_formal_coefficients_gaussians():
    # c0 = uv, c1 = {u, v}/(2i) -> for the same radial Gaussian the bracket vanishes
    c = wk.formal_coefficients(GAUSS, GAUSS, (0.3, 0.1))
    assert c["c0"] == pytest.approx(math.exp(-2 * 0.1))
    assert abs(c["c1"]) < 1e-15


def test_flat_richardson_coefficients():
    u = wk.SampledFunction.parse("exp(-(a-3/10)**2-l**2)")
    v = wk.SampledFunction.parse("exp(-a**2-(l-1/5)**2)")
    num = wk.richardson_coefficients(u, v, (0.0, 0.0), wk.QuadratureConfig(nodes=48), FLAT)
    ex = wk.formal_coefficients(u, v, (0.0, 0.0))
    assert abs(num["c0"] - ex["c0"]) < 1e-6
    assert abs(num["c1"] - ex["c1"]) < 1e-6

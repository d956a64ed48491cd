from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from udfq.exactalg import Poly, monomials_upto
from udfq.phase_space import (LambdaConfig, bidifferential_term, coalgebra_map_defects, first_order_expected,
                              heisenberg_generators_primitive, lambda_star_direct, lambda_star_smash, poisson_bracket,
                              weyl_moyal_star)

LAMS = [Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(-1, 2)]
coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def phase_polys(n=1, deg=3):
    names = [f"q{i + 1}" for i in range(n)] + [f"p{i + 1}" for i in range(n)]
    return st.dictionaries(st.sampled_from(monomials_upto(names, deg)), coeffs, max_size=4).map(Poly)


def sympy_star(lam, u: Poly, v: Poly, n: int, tcap: int):
    qs = sp.symbols(" ".join(f"q{i + 1}" for i in range(n)) + " ")
    ps = sp.symbols(" ".join(f"p{i + 1}" for i in range(n)) + " ")
    t = sp.Symbol("t")
    su, sv = (sp.sympify(str(w).replace("^", "**")) for w in (u, v))
    return sp.expand(sum(t ** k * bidifferential_term(k, lam, su, sv, qs, ps) for k in range(tcap + 1)))


def to_sympy(p: Poly):
    return sp.expand(sp.sympify(str(p).replace("^", "**")))


@pytest.mark.parametrize("lam,expected", [
    (Fraction(0), "q1*p1 - t"), (Fraction(1, 2), "q1*p1 - 1/2*t"), (Fraction(1), "q1*p1"),
])
def test_p_star_q(lam, expected):
    cfg = LambdaConfig(lam, 1, 4)
    assert lambda_star_direct(cfg, Poly.parse("p1"), Poly.parse("q1")) == Poly.parse(expected)


@given(phase_polys(), phase_polys(), st.sampled_from(LAMS))
@settings(max_examples=40, deadline=None)
def test_direct_matches_smash(u, v, lam):
    cfg = LambdaConfig(lam, 1, 4)
    assert lambda_star_direct(cfg, u, v) == lambda_star_smash(cfg, u, v)


@given(phase_polys(2, 2), phase_polys(2, 2), st.sampled_from(LAMS))
@settings(max_examples=25, deadline=None)
def test_direct_matches_sympy_route(u, v, lam):
    cfg = LambdaConfig(lam, 2, 4)
    assert sp.expand(to_sympy(lambda_star_direct(cfg, u, v)) - sympy_star(lam, u, v, 2, 4)) == 0


@given(phase_polys(), phase_polys())
@settings(max_examples=40, deadline=None)
def test_half_is_moyal(u, v):
    assert lambda_star_direct(LambdaConfig("1/2", 1, 6), u, v) == weyl_moyal_star(1, u, v, 6)


@given(phase_polys(), phase_polys(), phase_polys(), st.sampled_from(LAMS))
@settings(max_examples=25, deadline=None)
def test_associative(u, v, w, lam):
    cfg = LambdaConfig(lam, 1, 6)
    star = lambda a, b: lambda_star_direct(cfg, a, b)
    assert star(star(u, v), w) == star(u, star(v, w))


@given(phase_polys(), phase_polys(), st.sampled_from(LAMS))
@settings(max_examples=30, deadline=None)
def test_first_order_term(u, v, lam):
    cfg = LambdaConfig(lam, 1, 4)
    star = lambda a, b: lambda_star_direct(cfg, a, b)
    assert (star(u, v) - star(v, u)).coeff_t(1) == poisson_bracket(u, v)
    assert star(u, v).coeff_t(1) == first_order_expected(cfg, u, v)


def test_unit_and_constants():
    cfg = LambdaConfig("1/3", 1, 4)
    u = Poly.parse("q1^2*p1 + p1^3")
    assert lambda_star_direct(cfg, Poly.const(1), u) == u
    assert lambda_star_direct(cfg, u, Poly.const(1)) == u


def test_moyal_is_symmetric_under_parity():
    # at lambda = 1/2, u*v - v*u is odd in t
    cfg = LambdaConfig("1/2", 1, 6)
    u, v = Poly.parse("q1^2*p1"), Poly.parse("q1*p1^2")
    c = lambda_star_direct(cfg, u, v) - lambda_star_direct(cfg, v, u)
    assert c.coeff_t(0).is_zero() and c.coeff_t(2).is_zero()


def test_coalgebra_map_conditions_hold():
    assert coalgebra_map_defects(LambdaConfig("1/2", 1, 3)) == []


def test_heisenberg_generators():
    r = heisenberg_generators_primitive(LambdaConfig("1/2", 2, 3))
    assert r == {"primitive": True, "relations": True}


def test_bad_config():
    with pytest.raises(ValueError):
        LambdaConfig("1/2", 0)
    assert LambdaConfig(2).out_of_range

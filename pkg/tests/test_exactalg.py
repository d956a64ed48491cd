from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from udfq.exactalg import Poly, TensorElement, monomials_upto, mono


def to_sympy(p: Poly):
    return sp.sympify(str(p).replace("^", "**"))


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6)
monos = st.sampled_from(monomials_upto(["q1", "p1", "t"], 3))
polys = st.dictionaries(monos, coeffs, max_size=5).map(Poly)


@pytest.mark.parametrize("text,expected", [
    ("q1*p1 + 1/2*t", "q1*p1 + 1/2*t"),
    ("(q1 + p1)^2", "q1^2 + 2*q1*p1 + p1^2"),
    ("0", "0"),
    ("-t^2", "-t^2"),
])
def test_parse_roundtrip(text, expected):
    p = Poly.parse(text)
    assert str(p) == expected
    assert Poly.parse(str(p)) == p


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        Poly.parse("q1 +")
    with pytest.raises(ValueError):
        Poly.parse("")


def test_tcap_truncates():
    p = Poly.parse("1 + t + t^2 + t^3", tcap=2)
    assert p == Poly.parse("1 + t + t^2")
    assert (Poly.parse("t", tcap=1) * Poly.parse("t", tcap=1)).is_zero()


def test_diff_and_substitute():
    p = Poly.parse("q1^3*p1 + 2*q1")
    assert p.diff("q1") == Poly.parse("3*q1^2*p1 + 2")
    assert p.diff("q1", 3) == Poly.parse("6*p1")
    assert p.substitute({"q1": Poly.parse("q1 + 1")}) == Poly.parse("(q1 + 1)^3*p1 + 2*q1 + 2")


def test_coeff_t_and_collect():
    p = Poly.parse("q1 + t*p1 + t^2*q1*p1")
    assert p.coeff_t(1) == Poly.parse("p1")
    assert p.coeff_t(2) == Poly.parse("q1*p1")
    c = p.collect(["q1"])
    assert c[mono(("q1", 1))] == Poly.parse("1 + t^2*p1")


@given(polys, polys, polys)
@settings(max_examples=60, deadline=None)
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == Poly()


@given(polys, polys)
@settings(max_examples=60, deadline=None)
def test_product_matches_sympy(a, b):
    assert sp.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


@given(polys)
@settings(max_examples=40, deadline=None)
def test_diff_matches_sympy(a):
    q1 = sp.Symbol("q1")
    assert sp.expand(to_sympy(a.diff("q1")) - sp.diff(to_sympy(a), q1)) == 0


def test_evaluate():
    p = Poly.parse("q1^2*p1 + 1/3")
    assert p.evaluate({"q1": 2, "p1": Fraction(1, 2)}) == Fraction(7, 3)


def test_tensor_scalar_leg_moves_t():
    x = TensorElement.pure(Poly.parse("q1"), Poly.parse("t*p1"), carriers=("C", "B"), scalar_leg=0)
    y = TensorElement.pure(Poly.parse("t*q1"), Poly.parse("p1"), carriers=("C", "B"), scalar_leg=0)
    assert x == y


def test_tensor_tcap_and_permute():
    x = TensorElement.pure(Poly.parse("t*q1"), Poly.parse("t*p1"), carriers=("C", "B"), scalar_leg=None, tcap=1)
    assert x.is_zero()
    z = TensorElement.pure(Poly.parse("q1"), Poly.parse("p1"), carriers=("L", "R"))
    assert z.permute([1, 0]).permute([1, 0]) == z


def test_tensor_addition_cancels():
    x = TensorElement.pure(Poly.parse("q1"), Poly.parse("p1"))
    assert (x - x).is_zero()
    assert (x + x) == x.scale(2)

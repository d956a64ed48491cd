from itertools import product
from math import comb, factorial

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from udfq.catalog import load_lie
from udfq.exactalg import Poly
from udfq.hopf import (LieAlgebra, axb_algebra, check_cocommutative, check_hopf_axioms, check_module_structures,
                       heisenberg_algebra, make_enveloping_bialgebra, make_symmetric_bialgebra, sweedler_iterate)
from udfq.phase_space import LambdaConfig, lr_actions


def test_lie_validation():
    heisenberg_algebra().validate()
    axb_algebra().validate()
    load_lie("sl2").validate()
    # [x,y] = z, [y,z] = x, [x,z] = x violates Jacobi
    table = [(0, 1, 2, 1), (1, 0, 2, -1), (1, 2, 0, 1), (2, 1, 0, -1), (0, 2, 0, 1), (2, 0, 0, -1)]
    with pytest.raises(ValueError):
        LieAlgebra.from_table(["x", "y", "z"], table).validate()
    with pytest.raises(ValueError):
        LieAlgebra.from_table(["x", "y"], [(0, 1, 2, 1)])


@pytest.mark.parametrize("B", [
    make_symmetric_bialgebra(2, tcap=3),
    make_enveloping_bialgebra(heisenberg_algebra(), tcap=3),
    make_enveloping_bialgebra(axb_algebra(), tcap=3),
    make_enveloping_bialgebra(load_lie("sl2"), tcap=3),
], ids=["S(R2)", "U(heis)", "U(axb)", "U(sl2)"])
def test_hopf_axioms(B):
    r = check_hopf_axioms(B, 3)
    assert r["all_pass"], r
    assert check_cocommutative(B, 3)


@pytest.mark.parametrize("a,b", [(1, 1), (2, 2), (3, 2), (2, 4)])
def test_heisenberg_reordering_closed_form(a, b):
    # [p2, p1] = -p3 is central, so p2^a p1^b = sum_k k! C(a,k) C(b,k) (-t p3)^k p1^(b-k) p2^(a-k)
    U = make_enveloping_bialgebra(heisenberg_algebra(), tcap=8)
    got = U.mul(U.element(Poly.var("p2", a)), U.element(Poly.var("p1", b)))
    expected = Poly()
    for k in range(min(a, b) + 1):
        c = factorial(k) * comb(a, k) * comb(b, k) * (-1) ** k
        expected = expected + Poly.parse(f"t^{k}*p3^{k}*p1^{b - k}*p2^{a - k}").scale(c)
    assert got == U.element(expected)


SL2_REP = {"p1": sp.Matrix([[1, 0], [0, -1]]), "p2": sp.Matrix([[0, 1], [0, 0]]), "p3": sp.Matrix([[0, 0], [1, 0]])}


def rep_of(p: Poly):
    # t = 1 in the defining representation of sl(2)
    out = sp.zeros(2)
    for m, c in p.terms.items():
        M = sp.eye(2)
        for name in ("p1", "p2", "p3"):
            e = dict(m).get(name, 0)
            M = M * SL2_REP[name] ** e
        out += sp.Rational(c.numerator, c.denominator) * M
    return out


@given(st.lists(st.sampled_from(["p1", "p2", "p3"]), min_size=2, max_size=5))
@settings(max_examples=40, deadline=None)
def test_sl2_pbw_product_is_a_homomorphism(word):
    U = make_enveloping_bialgebra(load_lie("sl2"))
    x = U.unit()
    for w in word:
        x = U.mul(x, U.element(Poly.var(w)))
    normal = sum((Poly.from_mono(k[0], c) for k, c in x.terms.items()), Poly())
    direct = sp.eye(2)
    for w in word:
        direct = direct * SL2_REP[w]
    assert rep_of(normal.substitute({"t": Poly.const(1)})) == direct


def test_antipode_reverses_words():
    U = make_enveloping_bialgebra(heisenberg_algebra())
    assert U.S(U.element(Poly.parse("p1*p2"))) == U.element(Poly.parse("p1*p2 - t*p3"))


def test_binomial_coproduct():
    B = make_symmetric_bialgebra(1)
    d = B.delta(B.element(Poly.parse("p1^3")))
    assert sorted(d.terms.values()) == [1, 1, 3, 3]


def test_sweedler_iterate_counts():
    B = make_symmetric_bialgebra(1)
    d = sweedler_iterate(B, B.element(Poly.parse("p1^2")), 2)
    assert sum(d.terms.values()) == 9  # (1 + 1 + 1)^2 summed over three legs


@pytest.mark.parametrize("lam", ["0", "1/3", "1/2", "1", "2"])
def test_lambda_actions_are_bimodule_algebras(lam):
    C = lr_actions(LambdaConfig(lam, 2, 3))
    r = check_module_structures(C, 2)
    assert r["all_pass"], r


def test_heisenberg_actions_need_lambda_one():
    from udfq.udf import heisenberg_group

    ok = check_module_structures(lr_actions(LambdaConfig(1, 3, 3), group=heisenberg_group()), 2)
    assert ok["all_pass"]
    half = check_module_structures(lr_actions(LambdaConfig("1/2", 3, 3), group=heisenberg_group()), 2)
    failed = {c["law"] for c in half["checks"] if not c["pass"]}
    assert {"left_module", "right_module"} <= failed

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from udfq.exactalg import Poly, monomials_upto
from udfq.hopf import check_hopf_axioms
from udfq.phase_space import LambdaConfig, corrupted_hopf, lr_actions, phase_space_hopf, phase_space_smash
from udfq.smash import (GaugeMap, SmashAlgebra, check_smash_associativity, gauge_product, gauge_product_direct,
                        gauge_smash)
from udfq.udf import heisenberg_group

ONE = Poly.const(1)


def smash(lam, kind="lr", n=1, tcap=4):
    return SmashAlgebra(lr_actions(LambdaConfig(lam, n, tcap)), kind, tcap=tcap)


@pytest.mark.parametrize("lam", [Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)])
def test_canonical_commutator(lam):
    A = smash(lam)
    q, p = A.element("q1", 1), A.element(1, "p1")
    assert A.mul(q, p) == A.element("q1", "p1") + A.element("t").scale(lam)
    assert A.mul(p, q) == A.element("q1", "p1") + A.element("t").scale(lam - 1)
    assert A.mul(q, p) - A.mul(p, q) == A.element("t")


def test_plain_smash_only_uses_left_action():
    A = smash(Fraction(1, 2), "plain")
    assert A.mul(A.element("q1"), A.element(1, "p1")) == A.element("q1", "p1")
    assert A.mul(A.element(1, "p1"), A.element("q1")) == A.element("q1", "p1") + A.element("t").scale(Fraction(-1, 2))


def test_lr_needs_cocommutative_bialgebra():
    with pytest.raises(ValueError):
        smash(Fraction(1, 2), "bogus")


@pytest.mark.parametrize("lam,kind", [("1/2", "lr"), ("1/3", "lr"), ("1/2", "plain"), ("2", "lr")])
def test_smash_associativity_symmetric(lam, kind):
    r = check_smash_associativity(smash(lam, kind, tcap=3), ["q1"], ["p1"], 3, 3)
    assert r["pass"], r["witness"]
    assert r["checked"] > 0


def test_smash_associativity_heisenberg_lambda_one():
    cfg = LambdaConfig(1, 3, 2)
    A = SmashAlgebra(lr_actions(cfg, group=heisenberg_group()), "lr", tcap=2)
    r = check_smash_associativity(A, cfg.q, cfg.p, 2, 2)
    assert r["pass"], r["witness"]


def test_smash_associativity_heisenberg_half_fails():
    cfg = LambdaConfig("1/2", 3, 3)
    A = SmashAlgebra(lr_actions(cfg, group=heisenberg_group()), "lr", tcap=3)
    r = check_smash_associativity(A, cfg.q, cfg.p, 3, 3, stop_at_first=True)
    assert not r["pass"]


def test_hopf_structure_passes_and_corruption_is_caught():
    cfg = LambdaConfig("1/2", 1, 3)
    assert check_hopf_axioms(phase_space_hopf(cfg), 2)["all_pass"]
    bad = check_hopf_axioms(corrupted_hopf(cfg), 2)
    assert not bad["all_pass"]
    assert not {c["law"]: c["pass"] for c in bad["checks"]}["coassociativity"]


def test_antipode_forms_differ():
    A = phase_space_smash(LambdaConfig("1/2", 1, 3))
    x = A.element("q1", "p1")
    assert A.antipode(x) == x
    assert A.antipode_via_products(x) == x.scale(2)


def test_lr_product_factorization():
    A = smash(Fraction(1, 3), tcap=4)
    x, y = A.element("q1^2", "p1"), A.element("q1", "p1^2")
    first, second, total = A.decompose_commutative(x, y)
    assert total == A.mul(x, y)


elems = st.tuples(st.sampled_from(monomials_upto(["q1"], 2)), st.sampled_from(monomials_upto(["p1"], 2)))


@given(elems, elems, st.sampled_from(["linear", "exp"]))
@settings(max_examples=25, deadline=None)
def test_gauge_routes_agree(x, y, kind):
    A = smash(Fraction(1, 2), tcap=3)
    N = lambda f: f.diff("q1", 2)
    S = GaugeMap.linear(N, 3) if kind == "linear" else GaugeMap.exp(N, 3)
    ex = A.element(Poly.from_mono(x[0]), Poly.from_mono(x[1]))
    ey = A.element(Poly.from_mono(y[0]), Poly.from_mono(y[1]))
    assert gauge_product(A, S, ex, ey) == gauge_product_direct(A, S, ex, ey)


def test_gauge_inverse_and_identity():
    S = GaugeMap.linear(lambda f: f.diff("q1", 2), 4)
    f = Poly.parse("q1^4 + t*q1^2")
    assert S.inverse(S(f)) == f
    assert S(S.inverse(f)) == f
    A = smash(Fraction(1, 2), tcap=3)
    x, y = A.element("q1^2", "p1"), A.element("q1", "p1")
    assert gauge_product(A, GaugeMap.identity(3), x, y) == A.mul(x, y)


def test_gauge_not_identity_at_zero_rejected():
    S = GaugeMap(lambda f: f.scale(2), 2)
    with pytest.raises(ValueError):
        S.inverse(Poly.parse("q1"))


def test_gauged_smash_is_associative():
    A = smash(Fraction(1, 2), tcap=3)
    G = gauge_smash(A, GaugeMap.linear(lambda f: f.diff("q1", 2), 3))
    assert check_smash_associativity(G, ["q1"], ["p1"], 3, 2)["pass"]

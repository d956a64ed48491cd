from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from udfq.catalog import load_group
from udfq.exactalg import Poly, monomials_upto
from udfq.phase_space import LambdaConfig, lambda_product
from udfq.udf import (ActionDescriptor, GroupDescriptor, NotBidifferential, canonical_bivector, check_associativity,
                      check_left_invariance, extract_poisson, fake_product, heisenberg_group, induced_product,
                      induction_product, pointwise_product, pushforward_bivector, semidirect_group,
                      transported_product, translation_action, udf_transport)

P_HALF = lambda_product(LambdaConfig("1/2", 1, 3))


@pytest.mark.parametrize("G", [
    heisenberg_group(), GroupDescriptor.abelian(3), load_group("r_x_r2"), load_group("r2_x_r2"), load_group("r2"),
    load_group("heisenberg"),
], ids=lambda G: G.name)
def test_group_laws(G):
    assert all(G.check_laws().values())


def test_heisenberg_bracket():
    g = heisenberg_group().lie_algebra(["p1", "p2", "p3"])
    assert g.bracket_basis(0, 1) == {2: 1}
    assert g.is_abelian() is False


def test_left_and_right_fields_commute():
    G = heisenberg_group()
    u = Poly.parse("q1^2*q2 + q3*q1")
    for i in range(3):
        for j in range(3):
            L, R = G.left_field(i), G.right_field(j)
            assert G.apply_field(L, G.apply_field(R, u)) == G.apply_field(R, G.apply_field(L, u))


def test_bad_group_rejected():
    with pytest.raises(ValueError):
        GroupDescriptor([Poly.parse("x1 + z")], [Poly.parse("-x1")])
    with pytest.raises(ValueError):
        GroupDescriptor([Poly.parse("x1 + y1")], [Poly.parse("-x1"), Poly.parse("x1")])


def test_non_group_law_detected():
    G = GroupDescriptor([Poly.parse("x1 + y1 + x1*y1")], [Poly.parse("-x1")])
    laws = G.check_laws()
    assert laws["associativity"] and not laws["left_inverse"]


@given(st.sampled_from(monomials_upto(["q1", "p1"], 3)), st.sampled_from(monomials_upto(["q1", "p1"], 3)))
@settings(max_examples=30, deadline=None)
def test_translation_transport_reproduces_product(a, b):
    u, v = Poly.from_mono(a), Poly.from_mono(b)
    M = transported_product(P_HALF, translation_action(GroupDescriptor.abelian(2, P_HALF.coords)))
    assert M(u, v) == P_HALF(u, v)


def shear_action():
    G = GroupDescriptor.abelian(2, P_HALF.coords)
    return ActionDescriptor(G, [Poly.parse(s) for s in ("y1 + x1", "y2 + x2", "y3 + x1")], ("m1", "m2", "m3"))


def test_transport_to_a_larger_manifold():
    A = shear_action()
    assert all(A.check_laws().values())
    M = transported_product(P_HALF, A)
    assert M(Poly.parse("m3"), Poly.parse("m2")) == Poly.parse("m2*m3 + 1/2*t")
    assert M(Poly.parse("m3"), Poly.parse("m1")) == Poly.parse("m1*m3")
    assert check_associativity(M, 3)["pass"]


def test_bivector_is_pushforward():
    A = shear_action()
    w = extract_poisson(transported_product(P_HALF, A))
    # pi^{12} = pi^{32} = 1 from X1* = -(d1 + d3), X2* = -d2
    expected = [[0, 1, 0], [-1, 0, -1], [0, 1, 0]]
    assert w.matrix == [[Poly.const(c) for c in row] for row in expected]
    assert w == pushforward_bivector(extract_poisson(P_HALF).matrix, A)
    assert w.is_antisymmetric() and w.is_poisson()


def test_canonical_bivector():
    assert extract_poisson(P_HALF) == canonical_bivector(1)


def test_non_bidifferential_detected():
    from udfq.udf import InvariantProduct

    bad = InvariantProduct("bad", ("q1", "p1"), lambda u, v: u * v + Poly.parse("t") * u.diff("q1") * v.diff("q1", 2), 2)
    with pytest.raises(NotBidifferential):
        extract_poisson(bad)


@pytest.mark.parametrize("name", ["r_x_r2", "r2_x_r2"])
def test_induced_product_invariant_and_associative(name):
    G = load_group(name)
    qc = [c for c in G.coords if c not in P_HALF.coords]
    ind = induced_product(qc, P_HALF)
    assert check_left_invariance(ind, G, 3)["pass"]
    assert check_associativity(ind, 3)["pass"]
    assert not check_left_invariance(fake_product(G.coords, 3), G, 3)["pass"]


def test_pointwise_is_invariant_everywhere():
    G = heisenberg_group()
    assert check_left_invariance(pointwise_product(G.coords, 3), G, 3)["pass"]


def test_semidirect_with_unipotent_action():
    G = semidirect_group(2, 1, [[Poly.parse("1"), Poly.parse("s1")], [Poly.parse("0"), Poly.parse("1")]],
                         ("q1", "p1", "a1"), "shear")
    assert all(G.check_laws().values())
    ind = induced_product(["q1", "p1"], pointwise_product(["a1"], 3))
    assert check_left_invariance(ind, G, 2)["pass"]


def test_induction_is_fiberwise():
    u, v = Poly.parse("a1*q1"), Poly.parse("a1^2*p1")
    assert induction_product(["a1"], P_HALF, u, v) == Poly.parse("a1^3*(q1*p1 + 1/2*t)")
    with pytest.raises(ValueError):
        induction_product(["q1"], P_HALF, u, v)


def test_transport_dimension_mismatch():
    G = GroupDescriptor.abelian(3)
    with pytest.raises(ValueError):
        udf_transport(P_HALF, translation_action(G), Poly.parse("x1"), Poly.parse("x2"))

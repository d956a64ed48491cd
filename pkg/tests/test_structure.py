import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from udfq import structure as S
from udfq.catalog import load_sla, load_triple

CATALOG = {t.name: t for t in S.triple_catalog()}

# name: (valid symplectic triple, exact, [k,p] isotropic, [g,g] abelian, HI split, center dim)
EXPECTED = {
    "flat R^2": (True, False, True, True, True, 2),
    "h(flat R^2)": (False, True, True, True, False, 1),
    "rank-one": (True, True, True, True, True, 0),
    "diag(a1,2a2)": (True, True, True, True, True, 0),
    "rank-one + flat R^2": (True, False, True, True, True, 2),
    "sl2 hyperbolic plane": (True, True, False, False, None, 0),
    "so3 sphere": (True, True, False, False, None, 0),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_catalog_triples(name):
    t = CATALOG[name]
    r = S.validate_triple(t)
    h = S.public(S.hi_split_diagnostics(t))
    got = (r["all_pass"], r["exact"], h["kp_isotropic"], h["derived_abelian"], h["split"], S.center_dimension(t))
    assert got == EXPECTED[name]
    assert h["hi_equivalence_holds"]


def test_central_extension_only_fails_faithfulness():
    # k = span(E) is central, so it cannot act faithfully on p
    r = S.validate_triple(CATALOG["h(flat R^2)"])
    assert [k for k, v in r.items() if isinstance(v, dict) and not v["pass"]] == ["k_faithful_on_p"]


def test_central_extension():
    ext, note = S.central_extension(S.flat_triple())
    assert note == "central extension by Omega"
    assert S.validate_exact_triple(ext)["all_pass"]
    assert ext.g.dim == 3 and S.center_dimension(ext) == 1
    same, note2 = S.central_extension(S.sl2_triple())
    assert note2.startswith("input already exact")


@pytest.mark.parametrize("name", ["flat", "heisenberg_ext", "rank1", "diag", "rank1_plus_flat", "sl2", "so3",
                                  "nilpotent"])
def test_triple_files_roundtrip(name):
    t = load_triple(name)
    back = S.triple_from_text(S.triple_to_text(t), name)
    assert back.sigma == t.sigma and back.omega == t.omega and back.g.consts == t.g.consts


def test_direct_sum_keeps_hi_equivalence():
    t = S.direct_sum(S.sl2_triple(), S.flat_triple())
    h = S.hi_split_diagnostics(t)
    assert h["hi_equivalence_holds"] and not h["derived_abelian"]


def test_sigma_must_be_involution():
    t = S.flat_triple()
    bad = S.SymplecticTriple(t.g, 2 * t.sigma, t.omega, "bad")
    assert not S.validate_triple(bad)["sigma_involution"]["pass"]


def test_elementary_instance_requires_split():
    with pytest.raises(ValueError):
        S.elementary_instance(S.sl2_triple())


@pytest.mark.parametrize("m,expected", [
    ([[2, 1], [0, 2]], ([[2, 0], [0, 2]], [[0, 1], [0, 0]])),
    ([[1, 1], [0, 2]], ([[1, 1], [0, 2]], [[0, 0], [0, 0]])),
    ([[0, 1], [0, 0]], ([[0, 0], [0, 0]], [[0, 1], [0, 0]])),
])
def test_jordan_chevalley_examples(m, expected):
    s, n = S.jordan_chevalley(sp.Matrix(m))
    assert (s, n) == (sp.Matrix(expected[0]), sp.Matrix(expected[1]))


@given(st.lists(st.integers(-2, 2), min_size=9, max_size=9))
@settings(max_examples=25, deadline=None)
def test_jordan_chevalley_properties(entries):
    m = sp.Matrix(3, 3, entries)
    s, n = S.jordan_chevalley(m)
    assert s + n == m
    assert s * n == n * s
    assert (n ** 3).is_zero_matrix
    x = sp.Symbol("x")
    sq = S.squarefree_part(sp.Poly(m.charpoly(x).as_expr(), x))
    assert S._poly_at(sq, s).is_zero_matrix


def test_rank_one_weights_and_signature():
    inst = S.rank_one_instance()
    w = S.weight_decomposition(inst)
    assert [tuple(a) for a in w.phi] == [(-1,), (1,)]
    assert w.b0_dim == 0 and w.sigma_pairing and w.jc_ok
    s = S.build_symplectic_lie_algebra(inst, w)
    assert s.signature() == {"dim": 2, "derived_series": [2, 1, 0], "omega_rank": 2}


@pytest.mark.parametrize("name", ["rank1", "diag"])
def test_round_trip_signature(name):
    data = load_sla(name)
    built = S.elementary_from_symplectic_lie_algebra(data["d"], data["rho"], data["eta"], name=name)
    inst = S.elementary_instance(built.triple, indecomposable=True, nonflat=True)
    w = S.weight_decomposition(inst)
    src = built.notes[0]
    expected = S.real_signature(src["s"], src["omega_s"])
    assert S.build_symplectic_lie_algebra(inst, w).signature() == expected
    flipped = [tuple(-c for c in a) for a in w.positive]
    assert S.build_symplectic_lie_algebra(inst, w, flipped).signature() == expected


def test_invalid_positive_system_rejected():
    inst = S.rank_one_instance()
    w = S.weight_decomposition(inst)
    assert not S.check_positive_system(w, [(1,), (-1,)])
    with pytest.raises(ValueError):
        S.build_symplectic_lie_algebra(inst, w, [(1,), (-1,)])


def test_degenerate_symplectic_data_rejected():
    with pytest.raises(ValueError):
        S.elementary_from_symplectic_lie_algebra(1, [[[1]]], [0])


def test_nilpotent_data_is_flat():
    r = S.nilpotent_flatness(S.nilpotent_instance())
    assert r["all_nilpotent"] and r["weights_zero_only"] and r["nonflat_indecomposable_excluded"]
    assert r["b0_dim"] == 2 and not r["valid_triple"]


def test_twist_rank_one_and_diag():
    a = sp.Symbol("a1", real=True)
    tw = S.twist_solve(S.rank_one_instance())
    assert sp.simplify(tw.phi[0] - sp.sinh(tw.symbols[0])) == 0
    assert sp.simplify(tw.jacobian_det - sp.cosh(tw.symbols[0])) == 0
    assert tw.global_diffeo
    d = S.twist_solve(S.diag_instance())
    a1, a2 = d.symbols
    assert sp.simplify(d.phi - sp.Matrix([sp.sinh(a1), sp.sinh(2 * a2) / 2])) == sp.zeros(2, 1)


def test_twist_flat():
    tw = S.twist_solve(S.flat_instance(2))
    assert tw.phi == sp.Matrix(tw.symbols) and tw.note
    for inst in (S.rank_one_instance(), S.diag_instance()):
        lim = S.twist_flat_limit(inst)
        assert lim == sp.Matrix(S.twist_solve(inst).symbols)


@given(st.integers(-3, 3).filter(bool), st.fractions(-3, 3, max_denominator=3).filter(bool))
@settings(max_examples=12, deadline=None)
def test_twist_rank_one_family(c, eta):
    inst = S.elementary_from_symplectic_lie_algebra(1, [[[c]]], [eta])
    assert S.validate_triple(inst.triple)["all_pass"]
    assert S.hi_split_diagnostics(inst.triple)["hi_equivalence_holds"]
    tw = S.twist_solve(inst)
    a = tw.symbols[0]
    assert sp.simplify(tw.phi[0] - sp.sinh(c * a) / c) == 0

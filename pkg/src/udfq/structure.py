"""Symplectic triples, exact triples, HI/split diagnostics, weights and twisting maps.

Everything is exact: matrices are sympy matrices over Q (or Q(i) after
complexification). Cocycles use the convention (delta xi)(X, Y) = xi([X, Y]).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product as iproduct
from typing import Sequence

import sympy as sp

from .hopf import LieAlgebra


def _q(c) -> sp.Rational:
    if isinstance(c, Fraction):
        return sp.Rational(c.numerator, c.denominator)
    return sp.nsimplify(c) if isinstance(c, float) else sp.sympify(c)


def _mat(rows) -> sp.Matrix:
    if isinstance(rows, sp.MatrixBase):
        return sp.Matrix(rows)
    return sp.Matrix([[_q(c) for c in row] for row in rows])


def span(vectors) -> sp.Matrix:
    """Columns forming a basis of the span (possibly zero columns)."""
    vecs = [sp.Matrix(v) for v in vectors]
    if not vecs:
        return sp.zeros(0, 0)
    m = sp.Matrix.hstack(*vecs)
    cols = m.columnspace()
    if not cols:
        return sp.zeros(m.rows, 0)
    return sp.Matrix.hstack(*cols)


def _cols(m: sp.Matrix) -> list[sp.Matrix]:
    return [m[:, j] for j in range(m.cols)]


def _rank(m: sp.Matrix) -> int:
    return 0 if m.cols == 0 or m.rows == 0 else m.rank()


def in_span(basis: sp.Matrix, v: sp.Matrix) -> bool:
    if basis.cols == 0:
        return all(sp.simplify(x) == 0 for x in v)
    return _rank(sp.Matrix.hstack(basis, v)) == _rank(basis)


def same_span(a: sp.Matrix, b: sp.Matrix) -> bool:
    ra, rb = _rank(a), _rank(b)
    if ra != rb:
        return False
    if ra == 0:
        return True
    return _rank(sp.Matrix.hstack(a, b)) == ra


class LieData:
    """Lie algebra with sympy structure constants (allows complex entries)."""

    def __init__(self, g: LieAlgebra):
        self.g = g
        self.n = g.dim
        self._ad = [sp.zeros(self.n, self.n) for _ in range(self.n)]
        for (i, j), row in g.consts.items():
            for k, c in row.items():
                self._ad[i][k, j] = _q(c)

    def ad(self, x: sp.Matrix) -> sp.Matrix:
        out = sp.zeros(self.n, self.n)
        for i in range(self.n):
            if x[i] != 0:
                out += x[i] * self._ad[i]
        return out

    def bracket(self, x: sp.Matrix, y: sp.Matrix) -> sp.Matrix:
        return self.ad(x) * y

    def e(self, i: int) -> sp.Matrix:
        v = sp.zeros(self.n, 1)
        v[i] = 1
        return v

    def bracket_span(self, a: sp.Matrix, b: sp.Matrix) -> sp.Matrix:
        return span([self.bracket(x, y) for x in _cols(a) for y in _cols(b)] or [sp.zeros(self.n, 1)])

    def derived(self) -> sp.Matrix:
        eye = sp.eye(self.n)
        return self.bracket_span(eye, eye)

    def is_abelian_span(self, a: sp.Matrix) -> bool:
        return all(self.bracket(x, y).is_zero_matrix for x in _cols(a) for y in _cols(a))

    def center(self) -> sp.Matrix:
        # X central iff ad(X) = 0 iff [X, e_j] = 0 for all j
        rows = []
        for j in range(self.n):
            rows.append(sp.Matrix.hstack(*[self._ad[i][:, j] for i in range(self.n)]))
        m = sp.Matrix.vstack(*rows) if rows else sp.zeros(0, self.n)
        ns = m.nullspace()
        return sp.Matrix.hstack(*ns) if ns else sp.zeros(self.n, 0)


# ---------------------------------------------------------------------------
# Triples


@dataclass
class SymplecticTriple:
    g: LieAlgebra
    sigma: sp.Matrix
    omega: sp.Matrix
    name: str = "triple"
    xi: sp.Matrix | None = None  # row vector with omega = delta xi, when known

    def __post_init__(self):
        self.sigma = sp.Matrix(self.sigma)
        self.omega = sp.Matrix(self.omega)
        n = self.g.dim
        if self.sigma.shape != (n, n) or self.omega.shape != (n, n):
            raise ValueError("sigma and omega must be square matrices of the algebra's dimension")
        self.L = LieData(self.g)

    @property
    def n(self) -> int:
        return self.g.dim

    @property
    def k(self) -> sp.Matrix:
        return _eigenspace(self.sigma, 1)

    @property
    def p(self) -> sp.Matrix:
        return _eigenspace(self.sigma, -1)

    def Omega(self, x: sp.Matrix, y: sp.Matrix):
        return (x.T * self.omega * y)[0, 0]

    def delta(self, xi: sp.Matrix) -> sp.Matrix:
        n = self.n
        return sp.Matrix(n, n, lambda i, j: (xi * self.L.bracket(self.L.e(i), self.L.e(j)))[0, 0])


def _eigenspace(m: sp.Matrix, lam) -> sp.Matrix:
    ns = (m - lam * sp.eye(m.rows)).nullspace()
    return sp.Matrix.hstack(*ns) if ns else sp.zeros(m.rows, 0)


def check_entry(ok: bool, witness=None) -> dict:
    return {"pass": bool(ok), "witness": None if ok else witness}


def solve_coboundary(t: SymplecticTriple, vanish_on: sp.Matrix | None = None) -> sp.Matrix | None:
    """A row xi with xi([X_i, X_j]) = Omega_ij, optionally with xi = 0 on given columns."""
    n = t.n
    xs = sp.symbols(f"xi0:{n}")
    row = sp.Matrix([xs])
    eqs = []
    for i in range(n):
        for j in range(i + 1, n):
            eqs.append((row * t.L.bracket(t.L.e(i), t.L.e(j)))[0, 0] - t.omega[i, j])
    if vanish_on is not None:
        for v in _cols(vanish_on):
            eqs.append((row * v)[0, 0])
    sol = sp.linsolve(eqs, xs) if eqs else sp.FiniteSet(tuple(0 for _ in xs))
    if not sol:
        return None
    vals = list(sol)[0]
    return sp.Matrix([[sp.sympify(v).subs({x: 0 for x in xs}) for v in vals]])


def validate_triple(t: SymplecticTriple) -> dict:
    n, L = t.n, t.L
    sigma, omega = t.sigma, t.omega
    k, p = t.k, t.p
    rep: dict = {}
    rep["sigma_involution"] = check_entry((sigma * sigma - sp.eye(n)).is_zero_matrix)
    bad = None
    for i, j in iproduct(range(n), repeat=2):
        ei, ej = L.e(i), L.e(j)
        if not (sigma * L.bracket(ei, ej) - L.bracket(sigma * ei, sigma * ej)).is_zero_matrix:
            bad = (i, j)
            break
    rep["sigma_automorphism"] = check_entry(bad is None, bad)
    pp = L.bracket_span(p, p) if p.cols else sp.zeros(n, 0)
    rep["pp_equals_k"] = check_entry(same_span(pp, k), {"dim[p,p]": _rank(pp), "dim k": k.cols})
    # faithfulness: X in k with ad(X)|p = 0 must be zero
    if k.cols:
        stack = sp.Matrix.vstack(*[L.ad(x) * p for x in _cols(k)]) if p.cols else None
        if p.cols == 0:
            faithful = False
        else:
            m = sp.Matrix.hstack(*[(L.ad(x) * p).reshape(n * p.cols, 1) for x in _cols(k)])
            faithful = _rank(m) == k.cols
    else:
        faithful = True
    rep["k_faithful_on_p"] = check_entry(faithful)
    rep["omega_antisymmetric"] = check_entry((omega + omega.T).is_zero_matrix)
    bad = None
    for i, j, l in combinations(range(n), 3):
        e = [L.e(i), L.e(j), L.e(l)]
        s = (t.Omega(L.bracket(e[0], e[1]), e[2]) + t.Omega(L.bracket(e[1], e[2]), e[0])
             + t.Omega(L.bracket(e[2], e[0]), e[1]))
        if s != 0:
            bad = (i, j, l)
            break
    rep["omega_cocycle"] = check_entry(bad is None, bad)
    kk = all(t.Omega(x, L.e(j)) == 0 for x in _cols(k) for j in range(n))
    rep["k_in_kernel"] = check_entry(kk)
    if p.cols:
        nd = (p.T * omega * p).det() != 0
    else:
        nd = False
    rep["omega_p_nondegenerate"] = check_entry(nd, {"dim p": p.cols})
    xi = solve_coboundary(t)
    xi_p = solve_coboundary(t, p) if xi is not None else None
    rep["exact"] = xi is not None
    rep["xi"] = None if xi is None else [str(c) for c in (xi_p if xi_p is not None else xi)]
    rep["all_pass"] = all(v["pass"] for v in rep.values() if isinstance(v, dict))
    return rep


def validate_exact_triple(t: SymplecticTriple) -> dict:
    """[p,p] = l, Omega = delta xi, i(l)Omega = 0, Omega|p symplectic."""
    rep = validate_triple(t)
    keys = ["sigma_involution", "sigma_automorphism", "pp_equals_k", "omega_antisymmetric", "omega_cocycle",
            "k_in_kernel", "omega_p_nondegenerate"]
    out = {k: rep[k] for k in keys}
    if t.xi is not None:
        out["omega_is_delta_xi"] = check_entry((t.delta(t.xi) - t.omega).is_zero_matrix)
        out["xi_vanishes_on_p"] = check_entry((t.xi * t.p).is_zero_matrix if t.p.cols else True)
    else:
        out["omega_is_delta_xi"] = check_entry(rep["exact"])
    out["all_pass"] = all(v["pass"] for v in out.values() if isinstance(v, dict))
    return out


# ---------------------------------------------------------------------------
# Central extension


def central_extension(t: SymplecticTriple) -> tuple[SymplecticTriple, str]:
    """h(g) = g ⊕ RE with [X, Y]_h = Omega(X, Y) E + [X, Y]_g; returns (exact triple, note)."""
    xi = solve_coboundary(t, t.p) or solve_coboundary(t)
    if xi is not None:
        return SymplecticTriple(t.g, t.sigma, t.omega, t.name, xi=xi), "input already exact; returned unchanged"
    n = t.n
    entries = []
    for (i, j), row in t.g.consts.items():
        for kk, c in row.items():
            entries.append((i, j, kk, c))
    for i in range(n):
        for j in range(n):
            if i != j and t.omega[i, j] != 0:
                entries.append((i, j, n, Fraction(str(t.omega[i, j]))))
    h = LieAlgebra.from_table(list(t.g.names) + ["E"], entries)
    h.validate()
    sigma = sp.diag(t.sigma, sp.Matrix([[1]]))
    omega = sp.diag(t.omega, sp.Matrix([[0]]))
    xi = sp.zeros(1, n + 1)
    xi[n] = 1
    return SymplecticTriple(h, sigma, omega, f"h({t.name})", xi=xi), "central extension by Omega"


def center_dimension(t: SymplecticTriple) -> int:
    return t.L.center().cols


# ---------------------------------------------------------------------------
# HI and split diagnostics


def hi_split_diagnostics(t: SymplecticTriple, indecomposable: bool = False, nonflat: bool = False) -> dict:
    L, n = t.L, t.n
    k, p = t.k, t.p
    l = L.bracket_span(k, p) if k.cols and p.cols else sp.zeros(n, 0)
    isotropic = all(t.Omega(x, y) == 0 for x in _cols(l) for y in _cols(l))
    der = L.derived()
    der_abelian = L.is_abelian_span(der)
    rep = {
        "kp_isotropic": isotropic,
        "derived_abelian": der_abelian,
        "hi_equivalence_holds": isotropic == der_abelian,
        "hi": isotropic,
        "dim_derived": der.cols,
        "dim_l": l.cols,
    }
    a = None
    if der_abelian:
        a = abelian_complement(t, der)
        rep["split"] = a is not None
        if a is not None:
            ap = _project_p(t, a)
            rep["a_in_p_abelian"] = L.is_abelian_span(ap)
            rep["a_complement"] = _rank(sp.Matrix.hstack(der, ap)) == n if ap.cols or der.cols else True
            rep["a_sigma_stable"] = same_span(t.sigma * ap, ap) if ap.cols else True
            a = ap
    else:
        rep["split"] = None
    if indecomposable and nonflat and a is not None:
        if a.cols == l.cols and a.cols:
            pairing = sp.Matrix(a.cols, l.cols, lambda i, j: t.Omega(a[:, i], l[:, j]))
            rep["a_l_duality"] = pairing.det() != 0
        else:
            rep["a_l_duality"] = False
    rep["_a"] = a
    rep["_b"] = der
    rep["_l"] = l
    return rep


def public(rep: dict) -> dict:
    return {k: v for k, v in rep.items() if not k.startswith("_")}


def abelian_complement(t: SymplecticTriple, b: sp.Matrix) -> sp.Matrix | None:
    """Solve for f: W -> b with {w + f(w)} abelian, W a coordinate complement of b."""
    L, n = t.L, t.n
    w = []
    cur = b
    for i in range(n):
        e = L.e(i)
        if not in_span(cur, e):
            w.append(e)
            cur = sp.Matrix.hstack(cur, e) if cur.cols else e
    if not w:
        return sp.zeros(n, 0)
    m, d = len(w), b.cols
    f = sp.symbols(f"f0:{m * max(d, 1)}")
    vecs = []
    for i in range(m):
        v = w[i]
        for j in range(d):
            v = v + f[i * d + j] * b[:, j]
        vecs.append(v)
    eqs = []
    for i in range(m):
        for j in range(i + 1, m):
            eqs.extend(list(L.bracket(vecs[i], vecs[j])))
    eqs = [sp.expand(e) for e in eqs if sp.expand(e) != 0]
    if not eqs:
        return sp.Matrix.hstack(*vecs)
    sol = sp.linsolve(eqs, f[: m * d])
    if not sol:
        return None
    vals = list(sol)[0]
    sub = {f[i]: sp.sympify(vals[i]).subs({x: 0 for x in f}) for i in range(m * d)}
    return sp.Matrix.hstack(*[v.subs(sub) for v in vecs])


def _project_p(t: SymplecticTriple, a: sp.Matrix) -> sp.Matrix:
    return span([(x - t.sigma * x) / 2 for x in _cols(a)]) if a.cols else a


# ---------------------------------------------------------------------------
# Elementary instances


@dataclass
class ElementaryInstance:
    triple: SymplecticTriple
    b: sp.Matrix            # basis of b = [g, g] (columns in g coordinates)
    a: sp.Matrix            # basis of a in p
    rho: list               # rho(a_j) as matrices on b in the b basis
    sigma_b: sp.Matrix
    l: sp.Matrix            # basis of l = [k, p]
    indecomposable: bool = False
    nonflat: bool = False
    notes: list = field(default_factory=list)


def elementary_instance(t: SymplecticTriple, indecomposable=False, nonflat=False) -> ElementaryInstance:
    rep = hi_split_diagnostics(t, indecomposable, nonflat)
    if not rep["derived_abelian"] or not rep["split"]:
        raise ValueError("triple is not HI split")
    a, b = rep["_a"], rep["_b"]
    pinv = (b.T * b).inv() * b.T
    rho = [pinv * t.L.ad(x) * b for x in _cols(a)]
    sigma_b = pinv * t.sigma * b
    return ElementaryInstance(t, b, a, rho, sigma_b, rep["_l"], indecomposable, nonflat)


def symplectic_lie_algebra(d_dim: int, rho: Sequence) -> LieAlgebra:
    """s = d ⋊ a with basis d_1..d_n, a_1..a_m and [a_i, d_j] = rho(a_i) d_j."""
    rho = [_mat(r) for r in rho]
    for r1, r2 in combinations(rho, 2):
        if not (r1 * r2 - r2 * r1).is_zero_matrix:
            raise ValueError("rho(a) must be a commuting family")
    entries = []
    for i, r in enumerate(rho):
        for j in range(d_dim):
            for kk in range(d_dim):
                if r[kk, j] != 0:
                    c = Fraction(str(r[kk, j]))
                    entries.append((d_dim + i, j, kk, c))
                    entries.append((j, d_dim + i, kk, -c))
    names = [f"d{j + 1}" for j in range(d_dim)] + [f"a{i + 1}" for i in range(len(rho))]
    return LieAlgebra.from_table(names, entries)


def coboundary_matrix(g: LieAlgebra, eta: Sequence) -> sp.Matrix:
    L = LieData(g)
    row = sp.Matrix([[_q(c) for c in eta]])
    return sp.Matrix(g.dim, g.dim, lambda i, j: (row * L.bracket(L.e(i), L.e(j)))[0, 0])


def elementary_from_symplectic_lie_algebra(d_dim: int, rho: Sequence, eta: Sequence | None = None,
                                           omega: sp.Matrix | None = None,
                                           name: str = "elementary") -> ElementaryInstance:
    """b = d ⊕ d with rho ⊕ (-rho), sigma = swap ⊕ (-Id_a), xi(X, X) = eta(X), Omega = delta xi."""
    rho_m = [_mat(r) for r in rho]
    m = len(rho_m)
    s = symplectic_lie_algebra(d_dim, rho_m)
    if eta is None:
        if omega is None:
            raise ValueError("give eta or omega")
        t_s = SymplecticTriple(s, -sp.eye(s.dim), sp.Matrix(omega))
        sol = solve_coboundary(t_s)
        if sol is None:
            raise ValueError("omega is not exact on s")
        eta = list(sol[:d_dim])
    eta = [_q(c) for c in eta[:d_dim]]
    om_s = coboundary_matrix(s, list(eta) + [0] * m)
    if om_s.det() == 0:
        raise ValueError("delta eta is degenerate on s: not a symplectic Lie algebra")
    n = 2 * d_dim + m
    entries = []
    for i, r in enumerate(rho_m):
        ai = 2 * d_dim + i
        for j in range(d_dim):
            for kk in range(d_dim):
                c = r[kk, j]
                if c != 0:
                    c = Fraction(str(c))
                    entries += [(ai, j, kk, c), (j, ai, kk, -c)]
                    entries += [(ai, d_dim + j, d_dim + kk, -c), (d_dim + j, ai, d_dim + kk, c)]
    names = [f"e{j + 1}" for j in range(d_dim)] + [f"f{j + 1}" for j in range(d_dim)] + \
            [f"a{i + 1}" for i in range(m)]
    g = LieAlgebra.from_table(names, entries)
    sigma = sp.zeros(n, n)
    for j in range(d_dim):
        sigma[d_dim + j, j] = 1
        sigma[j, d_dim + j] = 1
    for i in range(m):
        sigma[2 * d_dim + i, 2 * d_dim + i] = -1
    xi = sp.zeros(1, n)
    for j in range(d_dim):
        xi[j] = eta[j] / 2
        xi[d_dim + j] = eta[j] / 2
    t = SymplecticTriple(g, sigma, sp.zeros(n, n), name, xi=xi)
    t.omega = t.delta(xi)
    b = sp.Matrix.hstack(*[t.L.e(j) for j in range(2 * d_dim)])
    a = sp.Matrix.hstack(*[t.L.e(2 * d_dim + i) for i in range(m)])
    rho_b = [sp.diag(r, -r) for r in rho_m]
    sigma_b = sigma[: 2 * d_dim, : 2 * d_dim]
    l = span([t.L.e(j) - t.L.e(d_dim + j) for j in range(d_dim)])
    inst = ElementaryInstance(t, b, a, rho_b, sigma_b, l, indecomposable=True,
                              nonflat=any(not r.is_zero_matrix for r in rho_m))
    inst.notes.append({"s": s, "omega_s": om_s, "eta": eta})
    return inst


# ---------------------------------------------------------------------------
# Jordan–Chevalley and weights


def squarefree_part(poly: sp.Poly) -> sp.Poly:
    g = sp.gcd(poly, poly.diff())
    return sp.quo(poly, g)


def _poly_at(poly: sp.Poly, m: sp.Matrix) -> sp.Matrix:
    out = sp.zeros(m.rows, m.cols)
    for c in poly.all_coeffs():
        out = out * m + c * sp.eye(m.rows)
    return out


def jordan_chevalley(m: sp.Matrix, max_iter: int = 64) -> tuple[sp.Matrix, sp.Matrix]:
    """Exact S + N over Q by Chevalley's Newton iteration with the squarefree char poly."""
    x = sp.Symbol("x")
    cp = sp.Poly(m.charpoly(x).as_expr(), x, domain="QQ")
    p = squarefree_part(cp)
    dp = p.diff()
    s = sp.Matrix(m)
    for _ in range(max_iter):
        ps = _poly_at(p, s)
        if ps.is_zero_matrix:
            break
        s = s - ps * _poly_at(dp, s).inv()
    else:
        raise RuntimeError("Chevalley iteration did not converge")
    s = s.applyfunc(sp.nsimplify)
    return s, m - s


def _supported_eigs(m: sp.Matrix):
    x = sp.Symbol("x")
    roots = sp.roots(sp.Poly(m.charpoly(x).as_expr(), x))
    if sum(roots.values()) != m.rows:
        raise ValueError("eigenvalues outside Q(i) are not supported")
    for r in roots:
        re, im = sp.re(r), sp.im(r)
        if not (re.is_rational and im.is_rational):
            raise ValueError(f"eigenvalue {r} is not in Q(i)")
    return list(roots)


@dataclass
class WeightData:
    weights: dict            # weight tuple -> basis matrix of b_alpha (in b coordinates, complex)
    semisimple: list
    nilpotent: list
    positive: list
    sigma_pairing: bool
    b0_dim: int
    b0_vanishes: bool | None    # b0 = 0 when the instance is flagged indecomposable and non-flat
    jc_ok: bool

    @property
    def phi(self) -> list:
        return sorted(self.weights, key=_lex_key)


def _lex_key(alpha):
    return tuple(sp.re(c) for c in alpha) + tuple(sp.im(c) for c in alpha)


def _lex_positive(alpha) -> bool:
    for c in _lex_key(alpha):
        if c != 0:
            return c > 0
    return False


def weight_decomposition(inst: ElementaryInstance, positive: Sequence | None = None) -> WeightData:
    rho = inst.rho
    for r1, r2 in combinations(rho, 2):
        if not (r1 * r2 - r2 * r1).is_zero_matrix:
            raise ValueError("rho(a) is not a commuting family")
    dim = inst.b.cols
    ss, nn = [], []
    jc_ok = True
    for r in rho:
        s, nl = jordan_chevalley(r)
        ss.append(s)
        nn.append(nl)
        jc_ok &= (s * nl - nl * s).is_zero_matrix and (nl ** dim).is_zero_matrix and (s + nl - r).is_zero_matrix
        # semisimple: minimal polynomial squarefree, i.e. diagonalizable over C
        jc_ok &= s.is_diagonalizable()
    spaces = [((), sp.eye(dim))]
    for s in ss:
        eigs = _supported_eigs(s)
        nxt = []
        for alpha, basis in spaces:
            for lam in eigs:
                ns = ((s - lam * sp.eye(dim)) * basis).nullspace()
                if ns:
                    nxt.append((alpha + (sp.nsimplify(lam),), span([basis * v for v in ns])))
        spaces = nxt
    weights: dict = {}
    for alpha, basis in spaces:
        if alpha in weights:
            weights[alpha] = span(_cols(weights[alpha]) + _cols(basis))
        else:
            weights[alpha] = basis
    if sum(b.cols for b in weights.values()) != dim:
        raise ValueError("weight spaces do not span b^c")
    pairing = True
    for alpha, basis in weights.items():
        neg = tuple(-c for c in alpha)
        if neg not in weights or not same_span(inst.sigma_b * basis, weights[neg]):
            pairing = False
    zero = tuple(0 for _ in rho)
    b0 = weights[zero].cols if zero in weights else 0
    if positive is None:
        positive = [a for a in weights if _lex_positive(a)]
    positive = [tuple(sp.nsimplify(c) for c in a) for a in positive]
    b0_vanishes = (b0 == 0) if (inst.indecomposable and inst.nonflat) else None
    return WeightData(weights, ss, nn, positive, pairing, b0, b0_vanishes, jc_ok)


def check_positive_system(w: WeightData, positive) -> bool:
    pos = set(positive)
    neg = {tuple(-c for c in a) for a in pos}
    zero = {a for a in w.weights if all(c == 0 for c in a)}
    return not (pos & neg) and pos | neg | zero == set(w.weights) and not (pos & zero)


@dataclass
class ComplexSymplecticAlgebra:
    basis: sp.Matrix             # columns in g^c coordinates
    brackets: dict               # (i, j) -> coordinate vector in this basis
    omega: sp.Matrix             # Omega restricted to the basis
    nondegenerate: bool
    closed: bool
    projection_rank: int
    dim: int

    def derived_series_dims(self) -> list[int]:
        dims = [self.dim]
        cur = sp.eye(self.dim)
        while True:
            vecs = []
            for x in _cols(cur):
                for y in _cols(cur):
                    v = sp.zeros(self.dim, 1)
                    for i in range(self.dim):
                        for j in range(self.dim):
                            if x[i] != 0 and y[j] != 0:
                                v += x[i] * y[j] * self.brackets[(i, j)]
                    vecs.append(v)
            nxt = span(vecs) if vecs else sp.zeros(self.dim, 0)
            dims.append(nxt.cols)
            if nxt.cols == cur.cols or nxt.cols == 0:
                break
            cur = nxt
        return dims

    def signature(self) -> dict:
        return {"dim": self.dim, "derived_series": self.derived_series_dims(), "omega_rank": self.omega.rank()}


def build_symplectic_lie_algebra(inst: ElementaryInstance, w: WeightData,
                                 positive: Sequence | None = None) -> ComplexSymplecticAlgebra:
    """s^c = a^c ⋉ b^+ with Omega restricted, checked closed and nondegenerate."""
    positive = [tuple(sp.nsimplify(c) for c in a) for a in (positive or w.positive)]
    if not positive:
        raise ValueError("no nonzero weights: flat input has no associated symplectic Lie algebra")
    if not check_positive_system(w, positive):
        raise ValueError("invalid positive system")
    t = inst.triple
    bplus_b = span([c for a in positive for c in _cols(w.weights[a])])
    bplus = inst.b * bplus_b
    basis = sp.Matrix.hstack(inst.a, bplus)
    dim = basis.cols
    L = t.L
    pinv = (basis.H * basis).inv() * basis.H
    brackets = {}
    closed_alg = True
    for i in range(dim):
        for j in range(dim):
            v = L.bracket(basis[:, i], basis[:, j])
            c = (pinv * v).applyfunc(sp.nsimplify)
            if not (basis * c - v).applyfunc(sp.simplify).is_zero_matrix:
                closed_alg = False
            brackets[(i, j)] = c
    om = (basis.T * t.omega * basis).applyfunc(sp.simplify)
    nondeg = sp.simplify(om.det()) != 0
    closed = closed_alg
    for i, j, k in combinations(range(dim), 3):
        s = 0
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            s += (brackets[(a, b)].T * om[:, c])[0, 0]
        if sp.simplify(s) != 0:
            closed = False
    proj = [(x - t.sigma * x) / 2 for x in _cols(bplus)]
    prank = span(proj).cols if proj else 0
    return ComplexSymplecticAlgebra(basis, brackets, om, nondeg, closed, prank, dim)


def real_signature(s: LieAlgebra, omega: sp.Matrix) -> dict:
    L = LieData(s)
    dims = [s.dim]
    cur = sp.eye(s.dim)
    while True:
        nxt = L.bracket_span(cur, cur) if cur.cols else cur
        dims.append(nxt.cols)
        if nxt.cols == cur.cols or nxt.cols == 0:
            break
        cur = nxt
    return {"dim": s.dim, "derived_series": dims, "omega_rank": sp.Matrix(omega).rank()}


def nilpotent_flatness(inst: ElementaryInstance) -> dict:
    """All rho(a) nilpotent: weights are {0}, so b0 = b, while an indecomposable
    non-flat instance needs b0 = 0; such data can only be flat."""
    nil = all((r ** r.rows).is_zero_matrix for r in inst.rho)
    w = weight_decomposition(inst)
    zero_only = all(all(c == 0 for c in a) for a in w.weights)
    valid = validate_triple(inst.triple)
    return {
        "all_nilpotent": nil,
        "weights_zero_only": zero_only,
        "b0_dim": w.b0_dim,
        "nonflat_indecomposable_excluded": w.b0_dim > 0,
        "valid_triple": valid["all_pass"],
        "failed_checks": [k for k, v in valid.items() if isinstance(v, dict) and not v["pass"]],
    }


# ---------------------------------------------------------------------------
# Twisting map


@dataclass
class TwistResult:
    symbols: tuple
    phi: sp.Matrix
    jacobian: sp.Matrix
    jacobian_det: sp.Expr
    global_diffeo: bool | None
    note: str = ""


def _sinh_end(r: sp.Matrix) -> sp.Matrix:
    return ((r.exp() - (-r).exp()) / 2).applyfunc(lambda e: sp.simplify(e.rewrite(sp.sinh)))


def twist_solve(inst: ElementaryInstance, scale=1) -> TwistResult:
    """Solve xi(sinh(a) l) = xi([phi(a), l]) for phi(a) in a, l ranging over l."""
    t = inst.triple
    if t.xi is None:
        raise ValueError("twisting map needs an exact triple (xi)")
    m = inst.a.cols
    syms = sp.symbols(f"a1:{m + 1}", real=True)
    rho_a = sum((syms[i] * inst.rho[i] * scale for i in range(m)), sp.zeros(inst.b.cols, inst.b.cols))
    for r in inst.rho:
        if not r.is_diagonalizable():
            raise ValueError("non-diagonalizable rho is not supported")
    pinv = (inst.b.T * inst.b).inv() * inst.b.T
    sinh = _sinh_end(rho_a)
    lhs, M = [], []
    for lv in _cols(inst.l):
        lb = pinv * lv
        lhs.append(sp.simplify((t.xi * inst.b * sinh * lb)[0, 0]))
        M.append([(t.xi * t.L.bracket(inst.a[:, j] * scale, lv))[0, 0] for j in range(m)])
    M = sp.Matrix(M)
    if M.rank() < m:
        if all(sp.simplify(v) == 0 for v in lhs) and M.is_zero_matrix:
            phi = sp.Matrix(syms)
            jac = sp.eye(m)
            return TwistResult(syms, phi, jac, sp.Integer(1), True,
                               "flat: the defining identity is vacuous; phi = Id is its scaling limit")
        raise ValueError("a and l are not in duality")
    phi = (M.inv() * sp.Matrix(lhs)).applyfunc(sp.simplify)
    jac = phi.jacobian(syms).applyfunc(sp.simplify)
    det = sp.simplify(jac.det())
    gd = _global_diffeo(phi, syms)
    return TwistResult(syms, phi, jac, det, gd)


def _global_diffeo(phi: sp.Matrix, syms) -> bool | None:
    """Diagonal case: each channel depends on one variable, is strictly increasing and unbounded."""
    for i, f in enumerate(phi):
        free = f.free_symbols
        if free - {syms[i]}:
            return None
        d = sp.diff(f, syms[i])
        if not d.is_positive:
            return None
        if sp.limit(f, syms[i], sp.oo) != sp.oo or sp.limit(f, syms[i], -sp.oo) != -sp.oo:
            return False
    return True


def twist_flat_limit(inst: ElementaryInstance) -> sp.Matrix:
    """lim_{eps->0} of the twisting map for rho scaled by eps."""
    eps = sp.Symbol("eps", positive=True)
    res = twist_solve(inst, scale=eps)
    return res.phi.applyfunc(lambda e: sp.limit(e, eps, 0))


# ---------------------------------------------------------------------------
# Catalog instances


def rank_one_instance() -> ElementaryInstance:
    return elementary_from_symplectic_lie_algebra(1, [[[1]]], eta=[1], name="rank-one")


def diag_instance() -> ElementaryInstance:
    return elementary_from_symplectic_lie_algebra(2, [[[1, 0], [0, 0]], [[0, 0], [0, 2]]], eta=[1, 1],
                                                  name="diag(a1,2a2)")


def flat_instance(dim: int = 1) -> ElementaryInstance:
    """rho = 0: b and a commute; the triple is flat (and not a valid transvection triple)."""
    t = SymplecticTriple(LieAlgebra([f"e{i + 1}" for i in range(2 * dim)] + [f"a{i + 1}" for i in range(dim)]),
                         sp.eye(3 * dim), sp.zeros(3 * dim, 3 * dim), "flat-rho0", xi=sp.zeros(1, 3 * dim))
    n = 3 * dim
    sigma = sp.zeros(n, n)
    for j in range(dim):
        sigma[dim + j, j] = sigma[j, dim + j] = 1
    for i in range(dim):
        sigma[2 * dim + i, 2 * dim + i] = -1
    t.sigma = sigma
    xi = sp.zeros(1, n)
    for j in range(2 * dim):
        xi[j] = sp.Rational(1, 2)
    t.xi = xi
    b = sp.eye(n)[:, : 2 * dim]
    a = sp.eye(n)[:, 2 * dim:]
    l = span([t.L.e(j) - t.L.e(dim + j) for j in range(dim)])
    return ElementaryInstance(t, b, a, [sp.zeros(2 * dim, 2 * dim)] * dim, sigma[: 2 * dim, : 2 * dim], l)


def nilpotent_instance() -> ElementaryInstance:
    """g = span(K, L, A) with [A, L] = K, sigma = (+1, -1, -1): nilpotent rho(A)."""
    g = LieAlgebra.from_table(["K", "L", "A"], [(2, 1, 0, 1), (1, 2, 0, -1)])
    t = SymplecticTriple(g, sp.diag(1, -1, -1), sp.zeros(3, 3), "nilpotent")
    t.xi = sp.Matrix([[1, 0, 0]])
    t.omega = t.delta(t.xi)
    b = sp.eye(3)[:, :2]
    a = sp.eye(3)[:, 2:]
    rho = [sp.Matrix([[0, 1], [0, 0]])]
    l = span([t.L.e(1)])
    return ElementaryInstance(t, b, a, rho, sp.diag(1, -1), l)


def flat_triple() -> SymplecticTriple:
    return SymplecticTriple(LieAlgebra(["x", "y"]), -sp.eye(2), sp.Matrix([[0, 1], [-1, 0]]), "flat R^2")


def sl2_triple() -> SymplecticTriple:
    """sl(2) with sigma = diag(1,-1,-1) on (H, E, F) and Omega = delta(H*)."""
    g = LieAlgebra.from_table(["H", "E", "F"], [(0, 1, 1, 2), (1, 0, 1, -2), (0, 2, 2, -2), (2, 0, 2, 2),
                                               (1, 2, 0, 1), (2, 1, 0, -1)])
    t = SymplecticTriple(g, sp.diag(1, -1, -1), sp.zeros(3, 3), "sl2 hyperbolic plane")
    t.xi = sp.Matrix([[1, 0, 0]])
    t.omega = t.delta(t.xi)
    return t


def so3_triple() -> SymplecticTriple:
    g = LieAlgebra.from_table(["e1", "e2", "e3"], [(1, 2, 0, 1), (2, 1, 0, -1), (2, 0, 1, 1), (0, 2, 1, -1),
                                                  (0, 1, 2, 1), (1, 0, 2, -1)])
    t = SymplecticTriple(g, sp.diag(1, -1, -1), sp.zeros(3, 3), "so3 sphere")
    t.xi = sp.Matrix([[1, 0, 0]])
    t.omega = t.delta(t.xi)
    return t


def direct_sum(t1: SymplecticTriple, t2: SymplecticTriple, name=None) -> SymplecticTriple:
    n1 = t1.n
    entries = []
    for (i, j), row in t1.g.consts.items():
        for k, c in row.items():
            entries.append((i, j, k, c))
    for (i, j), row in t2.g.consts.items():
        for k, c in row.items():
            entries.append((i + n1, j + n1, k + n1, c))
    g = LieAlgebra.from_table([f"{x}_1" for x in t1.g.names] + [f"{x}_2" for x in t2.g.names], entries)
    xi = None
    if t1.xi is not None and t2.xi is not None:
        xi = sp.Matrix.hstack(t1.xi, t2.xi)
    return SymplecticTriple(g, sp.diag(t1.sigma, t2.sigma), sp.diag(t1.omega, t2.omega),
                            name or f"{t1.name} + {t2.name}", xi=xi)


def triple_catalog() -> list[SymplecticTriple]:
    flat = flat_triple()
    heis, _ = central_extension(flat)
    return [
        flat,
        heis,
        rank_one_instance().triple,
        diag_instance().triple,
        direct_sum(rank_one_instance().triple, flat),
        sl2_triple(),
        so3_triple(),
    ]


# ---------------------------------------------------------------------------
# Text format


def triple_to_text(t: SymplecticTriple) -> str:
    lines = [f"# {t.name}", f"dim {t.n}", "names " + " ".join(t.g.names)]
    for (i, j), row in sorted(t.g.consts.items()):
        if i < j:
            for k, c in sorted(row.items()):
                lines.append(f"{i + 1} {j + 1} {k + 1} {c}")
    lines.append("sigma")
    lines += [" ".join(str(x) for x in t.sigma.row(i)) for i in range(t.n)]
    lines.append("omega")
    lines += [" ".join(str(x) for x in t.omega.row(i)) for i in range(t.n)]
    if t.xi is not None:
        lines.append("xi " + " ".join(str(x) for x in t.xi))
    return "\n".join(lines) + "\n"


def triple_from_text(text: str, name: str = "triple") -> SymplecticTriple:
    from .catalog import parse_lie_text

    lie_lines, sigma, omega, xi = [], [], [], None
    mode = "lie"
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            if raw.startswith("# ") and name == "triple":
                name = raw[2:].strip()
            continue
        if line in ("sigma", "omega"):
            mode = line
            continue
        if line.startswith("xi "):
            xi = sp.Matrix([[sp.Rational(x) for x in line.split()[1:]]])
            continue
        if mode == "lie":
            lie_lines.append(line)
        elif mode == "sigma":
            sigma.append([sp.Rational(x) for x in line.split()])
        else:
            omega.append([sp.Rational(x) for x in line.split()])
    g = parse_lie_text("\n".join(lie_lines))
    if len(sigma) != g.dim or len(omega) != g.dim:
        raise ValueError("sigma and omega need one row per basis element")
    return SymplecticTriple(g, sp.Matrix(sigma), sp.Matrix(omega), name, xi=xi)

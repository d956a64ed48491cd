"""Smash and L-R smash products, their Hopf structure, and gauge transport.

Elements of C⊗B are rank-2 TensorElements with carriers ("C", "B"). Powers
of t are collected in the C leg: either t is a scalar of Q[[t]], or (for the
Hopf structure with Delta(t) = t⊗1 + 1⊗t) t is an element of C and B is t-free.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable

from .exactalg import (
    T,
    Mono,
    Poly,
    TensorElement,
    _split_t,
    _with_t,
    mono_deg,
    monomials_upto,
    tdeg,
)
from .hopf import (
    Bialgebra,
    BimoduleAlgebra,
    _poly_leg,
    as_elem,
    check_cocommutative,
    sweedler_iterate,
)

CB = ("C", "B")


def pure(f: Poly, a: Poly, tcap=None) -> TensorElement:
    """f ⊗ a in C⊗B."""
    return TensorElement.pure(f, a, carriers=CB, scalar_leg=0, tcap=tcap)


def _pairs(x: TensorElement):
    """Yield (f, a, t-degree, coeff) with t stripped from the C leg."""
    for (fm, am), c in x.terms.items():
        fm, k = _split_t(fm)
        yield fm, am, k, c


class SmashAlgebra:
    """C♯B (kind "plain") or C♮B (kind "lr") built on a bimodule algebra C."""

    def __init__(self, C: BimoduleAlgebra, kind: str = "lr", tcap: int | None = None,
                 cocommutativity_degree: int = 3):
        if kind not in ("plain", "lr"):
            raise ValueError(f"unknown smash kind {kind!r}")
        self.C = C
        self.B = C.B
        self.kind = kind
        self.tcap = C.tcap if tcap is None else tcap
        if kind == "lr" and not check_cocommutative(self.B, cocommutativity_degree):
            raise ValueError("the L-R smash product needs a cocommutative bialgebra")
        self._cache: dict = {}

    # -- elements ---------------------------------------------------------
    def element(self, f, a=1) -> TensorElement:
        f = f if isinstance(f, Poly) else Poly.parse(str(f))
        a = a if isinstance(a, Poly) else Poly.parse(str(a))
        return pure(f, a, self.tcap)

    def one(self) -> TensorElement:
        return self.element(Poly.const(1), Poly.const(1))

    def zero(self) -> TensorElement:
        return TensorElement.zero(CB, 0, self.tcap)

    def _b(self, m: Mono) -> TensorElement:
        return as_elem(Poly.from_mono(m), self.B.carriers[0], self.B.tcap)

    def _terms_of(self, e: TensorElement):
        for (m,), c in e.terms.items():
            yield Poly.from_mono(m), c

    # -- product ----------------------------------------------------------
    def mul(self, x: TensorElement, y: TensorElement) -> TensorElement:
        if x.carriers != CB or y.carriers != CB:
            raise ValueError(f"carrier mismatch: {x.carriers} / {y.carriers} not in C⊗B")
        acc: dict = {}
        for f, a, kx, cx in _pairs(x):
            for g, b, ky, cy in _pairs(y):
                if self.tcap is not None and kx + ky > self.tcap:
                    continue
                key = (f, a, g, b)
                if key not in self._cache:
                    self._cache[key] = self._mul_pure(*key)
                for (fm, am), v in self._cache[key].terms.items():
                    k2 = (_with_t(fm, kx + ky), am)
                    acc[k2] = acc.get(k2, 0) + cx * cy * v
        return TensorElement(acc, CB, 0, self.tcap)

    def _mul_pure(self, f: Mono, a: Mono, g: Mono, b: Mono) -> TensorElement:
        C, B = self.C, self.B
        fp, gp = Poly.from_mono(f), Poly.from_mono(g)
        da = B.delta(self._b(a))
        out = self.zero()
        if self.kind == "plain":
            bb = self._b(b)
            for (a1, a2), c in da.terms.items():
                left = C.mul(fp, C.left(Poly.from_mono(a1), gp))
                right = _poly_leg(B.mul(self._b(a2), bb))
                out = out + pure(left, right, self.tcap).scale(c)
            return out
        db = B.delta(self._b(b))
        for (a1, a2), c in da.terms.items():
            ag = C.left(Poly.from_mono(a1), gp)
            for (b1, b2), c2 in db.terms.items():
                left = C.mul(C.right(fp, Poly.from_mono(b1)), ag)
                right = _poly_leg(B.mul(self._b(a2), self._b(b2)))
                out = out + pure(left, right, self.tcap).scale(c * c2)
        return out

    def power(self, x: TensorElement, k: int) -> TensorElement:
        out = self.one()
        for _ in range(k):
            out = self.mul(out, x)
        return out

    # -- coalgebra data (needs C.coproduct) --------------------------------
    def _need_coalgebra(self):
        if self.C.coproduct is None or self.C.counit is None:
            raise ValueError("C carries no coalgebra data")

    def coproduct(self, x: TensorElement) -> TensorElement:
        """(23)∘(Delta_C ⊗ Delta_B); t is an element of C here."""
        self._need_coalgebra()
        out = TensorElement.zero(CB + CB, None, self.tcap)
        for (fm, am), c in x.terms.items():
            dc = self.C.coproduct(Poly.from_mono(fm))
            db = self.B.delta(self._b(am))
            acc = {}
            for (f1, f2), u in dc.terms.items():
                for (a1, a2), v in db.terms.items():
                    k = (f1, a1, f2, a2)
                    acc[k] = acc.get(k, 0) + u * v
            out = out + TensorElement(acc, CB + CB, None, self.tcap).scale(c)
        return out

    def counit(self, x: TensorElement) -> Poly:
        self._need_coalgebra()
        out = Poly({}, self.tcap)
        for (fm, am), c in x.terms.items():
            out = out + self.C.counit(Poly.from_mono(fm)) * self.B.eps(self._b(am)) * c
        return out

    def antipode(self, x: TensorElement) -> TensorElement:
        """J(f⊗a) = sum J_B(a1) ⇀ J_C(f) ↼ J_B(a2) ⊗ J_B(a3)."""
        self._need_coalgebra()
        if self.C.antipode is None or self.B.antipode is None:
            raise ValueError("antipode needs Hopf data on both C and B")
        C, B = self.C, self.B
        out = self.zero()
        for (fm, am), c in x.terms.items():
            jf = C.antipode(Poly.from_mono(fm))
            d2 = sweedler_iterate(B, self._b(am), 2)
            for (a1, a2, a3), v in d2.terms.items():
                s1 = _poly_leg(B.S(self._b(a1)))
                s2 = _poly_leg(B.S(self._b(a2)))
                s3 = _poly_leg(B.S(self._b(a3)))
                left = C.right(C.left(s1, jf), s2)
                out = out + pure(left, s3, self.tcap).scale(c * v)
        return out

    def antipode_via_products(self, x: TensorElement) -> TensorElement:
        """Second form: sum (1⊗J(a1)) ⋆ (J_C(f)⊗1) ⋆ (1⊗J(a2))."""
        C, B = self.C, self.B
        out = self.zero()
        one = Poly.const(1)
        for (fm, am), c in x.terms.items():
            jf = C.antipode(Poly.from_mono(fm))
            d = B.delta(self._b(am))
            for (a1, a2), v in d.terms.items():
                s1 = _poly_leg(B.S(self._b(a1)))
                s2 = _poly_leg(B.S(self._b(a2)))
                y = self.mul(self.mul(self.element(one, s1), self.element(jf, one)), self.element(one, s2))
                out = out + y.scale(c * v)
        return out

    def as_bialgebra(self) -> Bialgebra:
        """C♮B as a bialgebra over Q with t inside C (t not a ground scalar)."""
        self._need_coalgebra()
        names = self.C.variables + (T,)
        bsyms = self.B.symbols

        def product(x, y):
            return self.mul(x, y)

        def basis(maxdeg):
            out = []
            for fm in monomials_upto(names, maxdeg):
                for am in monomials_upto(bsyms, maxdeg - mono_deg(fm)):
                    if self.tcap is None or tdeg(fm) <= self.tcap:
                        out.append(TensorElement({(fm, am): 1}, CB, 0, self.tcap))
            return out

        return Bialgebra(name=f"C♮{self.B.name}", arity=2, carriers=CB, product=product, unit=self.one,
                         coproduct=self.coproduct, counit=self.counit,
                         antipode=self.antipode if self.C.antipode else None, basis=basis,
                         cocommutative=False, t_scalar=False, tcap=self.tcap)

    # -- factorization of the L-R product ---------------------------------
    def decompose_commutative(self, x: TensorElement, y: TensorElement, which: str | None = None):
        """Return (first factor, second factor, their componentwise product).

        which="i" needs B commutative, which="ii" needs C commutative; by
        default the first applicable item is used. Raises if the product
        differs from mul(x, y).
        """
        if which is None:
            which = "i" if self.B.commutative else ("ii" if self.C.commutative else None)
        if which is None or (which == "i" and not self.B.commutative) or (which == "ii" and not self.C.commutative):
            raise ValueError("decomposition needs B commutative (item i) or C commutative (item ii)")
        if self.kind != "lr":
            raise ValueError("decomposition applies to the L-R smash product")
        total = self.zero()
        first_all = self.zero()
        second_all = self.zero()
        for f, a, kx, cx in _pairs(x):
            for g, b, ky, cy in _pairs(y):
                right_part = self._right_factor(Poly.from_mono(f), b)   # sum (f↼b1)⊗b2
                left_part = self._left_factor(a, Poly.from_mono(g))     # sum (a1⇀g)⊗a2
                if which == "i":
                    first, second = right_part, left_part
                else:
                    first, second = left_part, right_part
                prod = self._componentwise(first, second)
                scale = cx * cy
                tpow = Poly.var(T, kx + ky) if kx + ky else Poly.const(1)
                total = total + _tmul(prod, tpow, self.tcap).scale(scale)
                first_all = first_all + first.scale(scale)
                second_all = second_all + second.scale(scale)
        expected = self.mul(x, y)
        if total != expected:
            raise AssertionError(f"decomposition ({which}) disagrees with the L-R smash product")
        return first_all, second_all, total

    def _right_factor(self, f: Poly, b: Mono) -> TensorElement:
        out = self.zero()
        for (b1, b2), c in self.B.delta(self._b(b)).terms.items():
            out = out + pure(self.C.right(f, Poly.from_mono(b1)), Poly.from_mono(b2), self.tcap).scale(c)
        return out

    def _left_factor(self, a: Mono, g: Poly) -> TensorElement:
        out = self.zero()
        for (a1, a2), c in self.B.delta(self._b(a)).terms.items():
            out = out + pure(self.C.left(Poly.from_mono(a1), g), Poly.from_mono(a2), self.tcap).scale(c)
        return out

    def _componentwise(self, x: TensorElement, y: TensorElement) -> TensorElement:
        """Product in the tensor product algebra C⊗B."""
        out = self.zero()
        for (f, a), c in x.terms.items():
            for (g, b), d in y.terms.items():
                cp = self.C.mul(Poly.from_mono(f), Poly.from_mono(g))
                bp = _poly_leg(self.B.mul(self._b(a), self._b(b)))
                out = out + pure(cp, bp, self.tcap).scale(c * d)
        return out

    def specialize_t0(self, x: TensorElement) -> TensorElement:
        return TensorElement({k: c for k, c in x.terms.items() if not tdeg(k[0])}, CB, 0, self.tcap)


def _tmul(x: TensorElement, p: Poly, tcap) -> TensorElement:
    if p == 1:
        return x
    out = {}
    for (fm, am), c in x.terms.items():
        for m, v in p.terms.items():
            k = (_with_t(fm, tdeg(m)), am)
            out[k] = out.get(k, 0) + c * v
    return TensorElement(out, CB, 0, tcap)


def smash_mul(A: SmashAlgebra, x: TensorElement, y: TensorElement) -> TensorElement:
    return A.mul(x, y)


def lr_coproduct_antipode(A: SmashAlgebra, x: TensorElement):
    return A.coproduct(x), A.antipode(x)


def decompose_commutative(A: SmashAlgebra, x, y, which=None):
    return A.decompose_commutative(x, y, which)


# ---------------------------------------------------------------------------
# Gauge transport


class GaugeMap:
    """S = Id + O(t) acting on C, with T = S ⊗ Id on C⊗B.

    ``forward`` is any Q[[t]]-linear map on polynomials that reduces to the
    identity at t = 0. The inverse is the Neumann series sum_k (Id - S)^k,
    which terminates at the truncation order.
    """

    def __init__(self, forward: Callable[[Poly], Poly], tcap: int, name: str = "S"):
        self.forward = forward
        self.tcap = tcap
        self.name = name
        self._fcache: dict = {}
        self._icache: dict = {}

    @classmethod
    def identity(cls, tcap: int) -> "GaugeMap":
        return cls(lambda f: f, tcap, "Id")

    @classmethod
    def linear(cls, n_map: Callable[[Poly], Poly], tcap: int) -> "GaugeMap":
        """S = Id + t N."""
        return cls(lambda f: (f + Poly.var(T) * n_map(f)).truncate(tcap), tcap, "Id+tN")

    @classmethod
    def exp(cls, n_map: Callable[[Poly], Poly], tcap: int) -> "GaugeMap":
        """S = exp(t N), truncated at tcap."""

        def fwd(f):
            out, term = f, f
            for k in range(1, tcap + 1):
                term = (Poly.var(T) * n_map(term)).truncate(tcap)
                if term.is_zero():
                    break
                out = out + term * Fraction(1, factorial(k))
            return out.truncate(tcap)

        return cls(fwd, tcap, "exp(tN)")

    def _on_monomials(self, f: Poly, fn, cache) -> Poly:
        out = Poly({}, self.tcap)
        for m, c in f.terms.items():
            if m not in cache:
                cache[m] = fn(Poly.from_mono(m)).truncate(self.tcap)
            out = out + cache[m] * c
        return out

    def __call__(self, f: Poly) -> Poly:
        return self._on_monomials(f, self.forward, self._fcache)

    def inverse(self, f: Poly) -> Poly:
        return self._on_monomials(f, self._neumann, self._icache)

    def _neumann(self, f: Poly) -> Poly:
        out = f
        term = f
        for _ in range(self.tcap + 1):
            term = (term - self(term)).truncate(self.tcap)
            if term.is_zero():
                return out.truncate(self.tcap)
            out = out + term
        raise ValueError("gauge map is not the identity at t = 0; it cannot be inverted at this truncation order")

    def T(self, x: TensorElement) -> TensorElement:
        return _apply_c(x, self)

    def T_inv(self, x: TensorElement) -> TensorElement:
        return _apply_c(x, self.inverse)


def _apply_c(x: TensorElement, fn) -> TensorElement:
    out = {}
    for (fm, am), c in x.terms.items():
        for m, v in fn(Poly.from_mono(fm)).terms.items():
            out[(m, am)] = out.get((m, am), 0) + c * v
    return TensorElement(out, x.carriers, x.scalar_leg, x.tcap)


def gauged_bimodule(C: BimoduleAlgebra, S: GaugeMap) -> BimoduleAlgebra:
    """(C, •^S, ⇀^S, ↼^S) with f •^S g = S^-1(S f . S g) and conjugated actions."""
    tcap = S.tcap if C.tcap is None else min(S.tcap, C.tcap)

    def left_mono(m, f):
        return S.inverse(C.left_mono(m, S(f)).truncate(tcap))

    def right_mono(f, m):
        return S.inverse(C.right_mono(S(f), m).truncate(tcap))

    def product(f, g):
        return S.inverse(C.mul(S(f), S(g)))

    return BimoduleAlgebra(B=C.B, variables=C.variables, left_mono=left_mono, right_mono=right_mono,
                           product=product, commutative=C.commutative, tcap=tcap, name=f"{C.name}_S")


def gauge_smash(A: SmashAlgebra, S: GaugeMap) -> SmashAlgebra:
    return SmashAlgebra(gauged_bimodule(A.C, S), A.kind, tcap=S.tcap if A.tcap is None else min(A.tcap, S.tcap))


def gauge_product(A: SmashAlgebra, S: GaugeMap, x: TensorElement, y: TensorElement) -> TensorElement:
    """x ⋆^S y computed as the L-R smash product of the gauged structures."""
    return gauge_smash(A, S).mul(x, y)


def gauge_product_direct(A: SmashAlgebra, S: GaugeMap, x: TensorElement, y: TensorElement) -> TensorElement:
    """x ⋆^S y computed as T^-1(Tx ⋆ Ty)."""
    return S.T_inv(A.mul(S.T(x), S.T(y)))


def check_smash_associativity(A: SmashAlgebra, c_vars, b_vars, cmax: int, bmax: int,
                              stop_at_first: bool = False) -> dict:
    """(x y) z = x (y z) on pure tensors f_i ⊗ a_i with total C-degree <= cmax and
    total B-degree <= bmax over the triple."""
    cmon = monomials_upto(tuple(c_vars), cmax)
    bmon = monomials_upto(tuple(b_vars), bmax)
    elems = {}
    for f in cmon:
        for a in bmon:
            elems[(f, a)] = A.element(Poly.from_mono(f), Poly.from_mono(a))
    keys = list(elems)
    pair: dict = {}

    def prod(i, j):
        if (i, j) not in pair:
            pair[(i, j)] = A.mul(elems[i], elems[j])
        return pair[(i, j)]

    checked, failures, witness = 0, 0, None
    for x in keys:
        for y in keys:
            cd = mono_deg(x[0]) + mono_deg(y[0])
            bd = mono_deg(x[1]) + mono_deg(y[1])
            if cd > cmax or bd > bmax:
                continue
            xy = prod(x, y)
            for z in keys:
                if cd + mono_deg(z[0]) > cmax or bd + mono_deg(z[1]) > bmax:
                    continue
                checked += 1
                if A.mul(xy, elems[z]) != A.mul(elems[x], prod(y, z)):
                    failures += 1
                    if witness is None:
                        witness = tuple(f"{Poly.from_mono(k[0])} ⊗ {Poly.from_mono(k[1])}" for k in (x, y, z))
                    if stop_at_first:
                        return {"pass": False, "checked": checked, "failures": failures, "witness": witness}
    return {"pass": failures == 0, "checked": checked, "failures": failures, "witness": witness}

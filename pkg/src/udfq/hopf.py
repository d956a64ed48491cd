"""Bialgebras acting on polynomial algebras: S(V), U_t(g) and axiom checks.

Elements of a bialgebra of arity k are TensorElements of rank k (rank 1 for
polynomial carriers). Coproducts land in rank 2k tensors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from math import comb
from typing import Callable, Sequence

from .exactalg import (
    T,
    Mono,
    Poly,
    TensorElement,
    apply_block,
    block_mul,
    contract_blocks,
    mono,
    mono_deg,
    mono_mul,
    monomials_upto,
    tdeg,
)


class LieAlgebra:
    """Finite-dimensional Lie algebra given by rational structure constants.

    ``consts[(i, j)]`` is a dict ``{k: c}`` with [X_i, X_j] = sum_k c X_k.
    """

    def __init__(self, names: Sequence[str], consts: dict | None = None):
        self.names = tuple(names)
        self.dim = len(self.names)
        self.consts: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), row in (consts or {}).items():
            if not all(0 <= x < self.dim for x in (i, j, *row)):
                raise ValueError(f"structure constant index out of range in ({i}, {j}): {sorted(row)}")
            row = {k: Fraction(c) for k, c in row.items() if c}
            if row:
                self.consts[(i, j)] = row

    @classmethod
    def from_table(cls, names, entries) -> "LieAlgebra":
        """entries: iterable of (i, j, k, c) meaning c[i][j][k] = c (0-based)."""
        consts: dict = {}
        for i, j, k, c in entries:
            consts.setdefault((i, j), {})[k] = Fraction(c)
        return cls(names, consts)

    @classmethod
    def from_text(cls, text: str, names: Sequence[str] | None = None) -> "LieAlgebra":
        from .catalog import parse_lie_text

        return parse_lie_text(text, names)

    @classmethod
    def abelian(cls, n: int, names: Sequence[str] | None = None) -> "LieAlgebra":
        return cls(names or [f"p{i + 1}" for i in range(n)])

    def c(self, i: int, j: int, k: int) -> Fraction:
        return self.consts.get((i, j), {}).get(k, Fraction(0))

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        return self.consts.get((i, j), {})

    def bracket(self, u: Sequence, v: Sequence) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for (i, j), row in self.consts.items():
            a = u[i] * v[j]
            if a:
                for k, c in row.items():
                    out[k] += a * c
        return out

    def is_abelian(self) -> bool:
        return not self.consts

    def antisymmetry_defects(self) -> list[tuple[int, int, int]]:
        bad = []
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    if self.c(i, j, k) != -self.c(j, i, k):
                        bad.append((i, j, k))
        return bad

    def jacobi_defects(self) -> list[tuple[int, int, int]]:
        bad = []
        e = [[Fraction(int(a == b)) for b in range(self.dim)] for a in range(self.dim)]
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    s = [Fraction(0)] * self.dim
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        term = self.bracket(e[a], self.bracket(e[b], e[c]))
                        s = [x + y for x, y in zip(s, term)]
                    if any(s):
                        bad.append((i, j, k))
        return bad

    def validate(self) -> None:
        if self.antisymmetry_defects():
            raise ValueError("structure constants are not antisymmetric")
        if self.jacobi_defects():
            raise ValueError("structure constants violate the Jacobi identity")

    def __repr__(self) -> str:
        return f"LieAlgebra({self.names}, {self.consts})"


def heisenberg_algebra(names=("p1", "p2", "p3")) -> LieAlgebra:
    """[X, Y] = Z."""
    return LieAlgebra.from_table(names, [(0, 1, 2, 1), (1, 0, 2, -1)])


def axb_algebra(names=("p1", "p2")) -> LieAlgebra:
    """[H, E] = E."""
    return LieAlgebra.from_table(names, [(0, 1, 1, 1), (1, 0, 1, -1)])


# ---------------------------------------------------------------------------
# Bialgebra descriptors


@dataclass
class Bialgebra:
    """A bialgebra (optionally Hopf) given by total operations on TensorElements.

    ``t_scalar`` records whether t is a scalar of the ground ring Q[[t]]
    (tensor products then move t to leg 0) or an element of the algebra.
    """

    name: str
    arity: int
    carriers: tuple[str, ...]
    product: Callable[[TensorElement, TensorElement], TensorElement]
    unit: Callable[[], TensorElement]
    coproduct: Callable[[TensorElement], TensorElement]
    counit: Callable[[TensorElement], Poly]
    antipode: Callable[[TensorElement], TensorElement] | None = None
    basis: Callable[[int], list[TensorElement]] | None = None
    cocommutative: bool = False
    commutative: bool = False
    t_scalar: bool = True
    tcap: int | None = None
    symbols: tuple[str, ...] = ()
    extra: dict = field(default_factory=dict)

    @property
    def pair_carriers(self) -> tuple[str, ...]:
        return self.carriers + self.carriers

    @property
    def pair_scalar_leg(self):
        return 0 if self.t_scalar else None

    # elementwise helpers, linear in the argument
    def lin(self, fn, x: TensorElement) -> TensorElement:
        return apply_block(x, 0, x.rank, fn, carriers=None)

    def mul(self, x: TensorElement, y: TensorElement) -> TensorElement:
        out = None
        for kx, cx in x.terms.items():
            for ky, cy in y.terms.items():
                r = self.product(TensorElement({kx: 1}, self.carriers, 0, self.tcap),
                                 TensorElement({ky: 1}, self.carriers, 0, self.tcap)).scale(cx * cy)
                out = r if out is None else out + r
        return out if out is not None else TensorElement.zero(self.carriers, 0, self.tcap)

    def delta(self, x: TensorElement) -> TensorElement:
        return _map_linear(x, self.coproduct, self.pair_carriers, self.pair_scalar_leg, self.tcap)

    def eps(self, x: TensorElement) -> Poly:
        out = Poly({}, self.tcap)
        for k, c in x.terms.items():
            out = out + self.counit(TensorElement({k: 1}, self.carriers, 0, self.tcap)) * c
        return out

    def S(self, x: TensorElement) -> TensorElement:
        if self.antipode is None:
            raise ValueError(f"{self.name} has no antipode")
        return _map_linear(x, self.antipode, self.carriers, 0, self.tcap)

    def element(self, *polys: Poly) -> TensorElement:
        return TensorElement.pure(*polys, carriers=self.carriers, scalar_leg=0, tcap=self.tcap)

    def scalar_unit(self, s: Poly) -> TensorElement:
        """eta(s) for a scalar s in Q[[t]]."""
        u = self.unit()
        out = None
        for m, c in s.terms.items():
            part = TensorElement({(mono_mul(k[0], m),) + k[1:]: v * c for k, v in u.terms.items()},
                                 self.carriers, 0, self.tcap)
            out = part if out is None else out + part
        return out if out is not None else TensorElement.zero(self.carriers, 0, self.tcap)


def _map_linear(x: TensorElement, fn, carriers, scalar_leg, tcap) -> TensorElement:
    """Extend fn (defined on t-free single terms) linearly; t in leg 0 is a scalar
    when scalar_leg is 0, otherwise it is passed through to fn."""
    out = TensorElement.zero(carriers, scalar_leg, tcap)
    for k, c in x.terms.items():
        out = out + fn(TensorElement({k: 1}, x.carriers, 0, tcap)).scale(c)
    return out


def _strip_t_leg0(x: TensorElement) -> tuple[tuple, int]:
    (k, _), = x.terms.items()
    legs = list(k)
    t = 0
    rest = []
    for n, e in legs[0]:
        if n == T:
            t = e
        else:
            rest.append((n, e))
    legs[0] = tuple(rest)
    return tuple(legs), t


def _poly_leg(x: TensorElement) -> Poly:
    """Rank-1 tensor to Poly."""
    out = {}
    for k, c in x.terms.items():
        out[k[0]] = out.get(k[0], 0) + c
    return Poly(out, x.tcap)


def as_elem(p: Poly, carrier: str, tcap=None) -> TensorElement:
    return TensorElement({(m,): c for m, c in p.terms.items()}, (carrier,), 0, tcap)


def _binomial_coproduct(m: Mono) -> dict[tuple, Fraction]:
    """Delta(p^r) = sum_l C(r,l) p^l ⊗ p^(r-l) for primitive generators."""
    names = [n for n, _ in m]
    ranges = [range(e + 1) for _, e in m]
    out = {}
    for ls in iproduct(*ranges):
        c = 1
        for (n, e), l in zip(m, ls):
            c *= comb(e, l)
        left = mono(*zip(names, ls))
        right = mono(*((n, e - l) for (n, e), l in zip(m, ls)))
        out[(left, right)] = Fraction(c)
    return out


def _with_scalar_t(x: TensorElement, t: int) -> TensorElement:
    if not t:
        return x
    tm = ((T, t),)
    return TensorElement({(mono_mul(k[0], tm),) + k[1:]: c for k, c in x.terms.items()},
                         x.carriers, x.scalar_leg, x.tcap)


def _polynomial_bialgebra(name: str, symbols: Sequence[str], mul_mono, antipode_mono, tcap,
                          commutative: bool) -> Bialgebra:
    carrier = name
    symbols = tuple(symbols)

    def product(x, y):
        (kx,), tx = _strip_t_leg0(x)
        (ky,), ty = _strip_t_leg0(y)
        p = mul_mono(kx, ky) * Poly.var(T, tx + ty) if tx + ty else mul_mono(kx, ky)
        return as_elem(p.truncate(tcap), carrier, tcap)

    def unit():
        return as_elem(Poly.const(1), carrier, tcap)

    def coproduct(x):
        (k,), t = _strip_t_leg0(x)
        out = TensorElement(_binomial_coproduct(k), (carrier, carrier), 0, tcap)
        return _with_scalar_t(out, t)

    def counit(x):
        (k,), t = _strip_t_leg0(x)
        return Poly.var(T, t, tcap) if not k else Poly({}, tcap)

    def antipode(x):
        (k,), t = _strip_t_leg0(x)
        return as_elem(antipode_mono(k) * (Poly.var(T, t) if t else 1), carrier, tcap)

    def basis(maxdeg):
        return [as_elem(Poly.from_mono(m), carrier, tcap) for m in monomials_upto(symbols, maxdeg)]

    return Bialgebra(name=name, arity=1, carriers=(carrier,), product=product, unit=unit,
                     coproduct=coproduct, counit=counit, antipode=antipode, basis=basis,
                     cocommutative=True, commutative=commutative, t_scalar=True, tcap=tcap,
                     symbols=symbols)


def make_symmetric_bialgebra(n: int, tcap: int | None = None, symbols: Sequence[str] | None = None) -> Bialgebra:
    """S(R^n) on p1..pn with primitive generators."""
    if n < 1:
        raise ValueError("n must be >= 1")
    symbols = tuple(symbols or [f"p{i + 1}" for i in range(n)])

    def mul_mono(a, b):
        return Poly.from_mono(a) * Poly.from_mono(b)

    def antipode_mono(m):
        return Poly.from_mono(m, (-1) ** mono_deg(m))

    b = _polynomial_bialgebra("S", symbols, mul_mono, antipode_mono, tcap, commutative=True)
    b.name = f"S(R^{n})"
    return b


class Straightener:
    """PBW normal ordering in U_t(g): X_j X_i -> X_i X_j + t [X_j, X_i] for i < j."""

    def __init__(self, g: LieAlgebra, symbols: Sequence[str], max_steps: int = 200000):
        self.g = g
        self.symbols = tuple(symbols)
        self.index = {s: i for i, s in enumerate(self.symbols)}
        self.max_steps = max_steps
        self._memo: dict[tuple[int, ...], dict[tuple[int, tuple], Fraction]] = {}
        self._steps = 0

    def word(self, m: Mono) -> tuple[int, ...]:
        w = []
        for n, e in sorted(m, key=lambda x: self.index[x[0]]):
            w.extend([self.index[n]] * e)
        return tuple(w)

    def straighten(self, w: tuple[int, ...]) -> dict[tuple[int, tuple], Fraction]:
        """Returns {(t-degree, sorted word): coeff}."""
        if w in self._memo:
            return self._memo[w]
        self._steps += 1
        if self._steps > self.max_steps:
            raise RuntimeError("PBW straightening exceeded its step bound")
        for pos in range(len(w) - 1):
            if w[pos] > w[pos + 1]:
                break
        else:
            res = {(0, w): Fraction(1)}
            self._memo[w] = res
            return res
        j, i = w[pos], w[pos + 1]
        res: dict = {}
        for key, c in self.straighten(w[:pos] + (i, j) + w[pos + 2:]).items():
            res[key] = res.get(key, 0) + c
        for k, c in self.g.bracket_basis(j, i).items():
            for (td, ww), c2 in self.straighten(w[:pos] + (k,) + w[pos + 2:]).items():
                key = (td + 1, ww)
                res[key] = res.get(key, 0) + c * c2
        res = {k: v for k, v in res.items() if v}
        self._memo[w] = res
        return res

    def to_poly(self, terms: dict, tcap=None) -> Poly:
        out = {}
        for (td, w), c in terms.items():
            counts: dict[str, int] = {}
            for i in w:
                counts[self.symbols[i]] = counts.get(self.symbols[i], 0) + 1
            m = mono(*counts.items(), (T, td))
            out[m] = out.get(m, 0) + c
        return Poly(out, tcap)

    def product(self, a: Mono, b: Mono, tcap=None) -> Poly:
        return self.to_poly(self.straighten(self.word(a) + self.word(b)), tcap)


def make_enveloping_bialgebra(g: LieAlgebra, tcap: int | None = None,
                              symbols: Sequence[str] | None = None) -> Bialgebra:
    """U_t(g) in the PBW basis; t carries the bracket so t=0 gives S(g)."""
    g.validate()
    symbols = tuple(symbols or g.names)
    st = Straightener(g, symbols)
    cache: dict = {}

    def mul_mono(a, b):
        if (a, b) not in cache:
            cache[(a, b)] = st.product(a, b)
        return cache[(a, b)]

    def antipode_mono(m):
        w = tuple(reversed(st.word(m)))
        return st.to_poly(st.straighten(w)) * ((-1) ** len(w))

    b = _polynomial_bialgebra("U", symbols, mul_mono, antipode_mono, tcap, commutative=g.is_abelian())
    b.name = "U_t(g)"
    b.extra["lie"] = g
    b.extra["straightener"] = st
    return b


def sweedler_iterate(B: Bialgebra, b: TensorElement, k: int, leg: int = 0) -> TensorElement:
    """Delta^(k)(b), expanding the given leg at every step."""
    if k < 1:
        raise ValueError("k must be >= 1")
    x = B.delta(b)
    for step in range(1, k):
        pos = min(leg, step) * B.arity
        x = apply_block(x, pos, B.arity, lambda e: B.delta(e))
    return x


# ---------------------------------------------------------------------------
# Axiom checks


@dataclass
class Check:
    law: str
    passed: bool = True
    checked: int = 0
    witness: str | None = None

    def record(self, ok: bool, witness=None):
        self.checked += 1
        if not ok and self.passed:
            self.passed = False
            self.witness = str(witness)

    def as_dict(self):
        return {"law": self.law, "pass": self.passed, "checked": self.checked, "witness": self.witness}


def report(checks: Sequence[Check]) -> dict:
    return {"checks": [c.as_dict() for c in checks], "all_pass": all(c.passed for c in checks)}


def check_hopf_axioms(B: Bialgebra, maxdeg: int, pair_maxdeg: int | None = None) -> dict:
    """Exact verification of the bialgebra/Hopf laws on basis elements up to maxdeg."""
    basis = B.basis(maxdeg)
    w = B.arity
    pair_maxdeg = maxdeg if pair_maxdeg is None else pair_maxdeg

    def delta_block(e):
        return B.coproduct(e)

    coassoc = Check("coassociativity")
    counit = Check("counit")
    anti_l = Check("antipode_left")
    anti_r = Check("antipode_right")
    compat = Check("delta_multiplicative")
    eps_mul = Check("counit_multiplicative")
    cocomm = Check("cocommutativity")
    checks = [coassoc, counit, compat, eps_mul]
    for x in basis:
        d = B.delta(x)
        lhs = apply_block(d, 0, w, delta_block)
        rhs = apply_block(d, w, w, delta_block)
        coassoc.record(lhs == rhs, x)
        left = apply_block(d, 0, w, lambda e: B.counit(e))
        right = apply_block(d, w, w, lambda e: B.counit(e))
        counit.record(left == x and right == x, x)
        if B.antipode is not None:
            target = B.scalar_unit(B.eps(x))
            al = contract_blocks(apply_block(d, 0, w, lambda e: B.S(e)), w, B.mul)
            ar = contract_blocks(apply_block(d, w, w, lambda e: B.S(e)), w, B.mul)
            anti_l.record(al == target, x)
            anti_r.record(ar == target, x)
        if B.cocommutative:
            perm = list(range(w, 2 * w)) + list(range(w))
            cocomm.record(d.permute(perm) == d, x)
    if B.antipode is not None:
        checks += [anti_l, anti_r]
    if B.cocommutative:
        checks.append(cocomm)
    small = [x for x in basis if _deg(x) <= pair_maxdeg]
    for x in small:
        dx = B.delta(x)
        for y in small:
            if _deg(x) + _deg(y) > pair_maxdeg:
                continue
            xy = B.mul(x, y)
            lhs = B.delta(xy)
            rhs = block_mul(dx, B.delta(y), w, B.mul)
            compat.record(lhs == rhs, (x, y))
            eps_mul.record(B.eps(xy) == B.eps(x) * B.eps(y), (x, y))
    return report(checks)


def _deg(x: TensorElement) -> int:
    return max(sum(mono_deg(m) for m in k) for k in x.terms) if x.terms else -1


def check_cocommutative(B: Bialgebra, maxdeg: int = 3) -> bool:
    w = B.arity
    perm = list(range(w, 2 * w)) + list(range(w))
    for x in B.basis(maxdeg):
        d = B.delta(x)
        if d.permute(perm) != d:
            return False
    return True


# ---------------------------------------------------------------------------
# Bimodule algebras


@dataclass
class BimoduleAlgebra:
    """A polynomial algebra C with commuting left and right B-actions.

    Actions are given on B-monomials (t-free) and extended linearly; t inside
    a B element is a scalar and multiplies the result.
    """

    B: Bialgebra
    variables: tuple[str, ...]
    left_mono: Callable[[Mono, Poly], Poly]
    right_mono: Callable[[Poly, Mono], Poly]
    product: Callable[[Poly, Poly], Poly] = lambda f, g: f * g
    unit: Poly = field(default_factory=lambda: Poly.const(1))
    coproduct: Callable[[Poly], TensorElement] | None = None
    counit: Callable[[Poly], Poly] | None = None
    antipode: Callable[[Poly], Poly] | None = None
    commutative: bool = True
    tcap: int | None = None
    name: str = "C"

    def left(self, a: Poly, f: Poly) -> Poly:
        out = Poly({}, self.tcap)
        for m, c in a.terms.items():
            rest = tuple(x for x in m if x[0] != T)
            r = self.left_mono(rest, f) * c
            if tdeg(m):
                r = r * Poly.var(T, tdeg(m))
            out = out + r
        return out.truncate(self.tcap)

    def right(self, f: Poly, a: Poly) -> Poly:
        out = Poly({}, self.tcap)
        for m, c in a.terms.items():
            rest = tuple(x for x in m if x[0] != T)
            r = self.right_mono(f, rest) * c
            if tdeg(m):
                r = r * Poly.var(T, tdeg(m))
            out = out + r
        return out.truncate(self.tcap)

    def mul(self, f: Poly, g: Poly) -> Poly:
        return self.product(f, g).truncate(self.tcap)

    def basis(self, maxdeg: int, with_t: bool = False) -> list[Poly]:
        names = self.variables + ((T,) if with_t else ())
        return [Poly.from_mono(m) for m in monomials_upto(names, maxdeg)]


def iterated_actions(B: Bialgebra, left_gen: dict[str, Callable[[Poly], Poly]],
                     right_gen: dict[str, Callable[[Poly], Poly]], tcap=None):
    """Extend generator actions to PBW monomials.

    Left: X1^a1...Xn^an ⇀ f applies the rightmost generator first.
    Right: f ↼ X1^a1...Xn^an applies the leftmost generator first.
    """
    order = {s: i for i, s in enumerate(B.symbols)}

    def word(m):
        w = []
        for n, e in sorted(m, key=lambda x: order[x[0]]):
            w.extend([n] * e)
        return w

    def left_mono(m, f):
        for n in reversed(word(m)):
            f = left_gen[n](f).truncate(tcap)
        return f

    def right_mono(f, m):
        for n in word(m):
            f = right_gen[n](f).truncate(tcap)
        return f

    return left_mono, right_mono


def _b_poly(x: TensorElement) -> Poly:
    return _poly_leg(x)


def check_module_structures(C: BimoduleAlgebra, maxdeg: int, cmaxdeg: int | None = None) -> dict:
    """Module, module-algebra, bimodule and (if available) module-coalgebra laws."""
    B = C.B
    cmaxdeg = maxdeg if cmaxdeg is None else cmaxdeg
    bbasis = [(_b_poly(e), e) for e in B.basis(maxdeg)]
    cbasis = C.basis(cmaxdeg)
    one_b = _b_poly(B.unit())

    mod_l = Check("left_module")
    mod_r = Check("right_module")
    unit_l = Check("left_unit_and_constants")
    unit_r = Check("right_unit_and_constants")
    alg_l = Check("left_module_algebra")
    alg_r = Check("right_module_algebra")
    bimod = Check("bimodule_compatibility")
    checks = [mod_l, mod_r, unit_l, unit_r, alg_l, alg_r, bimod]

    def deg(p: Poly) -> int:
        return p.degree()

    for f in cbasis:
        unit_l.record(C.left(one_b, f) == f, f)
        unit_r.record(C.right(f, one_b) == f, f)
    for a, ea in bbasis:
        eps_a = B.eps(ea)
        unit_l.record(C.left(a, C.unit) == C.unit * eps_a, a)
        unit_r.record(C.right(C.unit, a) == C.unit * eps_a, a)
    for (a, ea), (b, eb) in iproduct(bbasis, bbasis):
        if deg(a) + deg(b) > maxdeg:
            continue
        ab = _b_poly(B.mul(ea, eb))
        for f in cbasis:
            mod_l.record(C.left(ab, f) == C.left(a, C.left(b, f)), (a, b, f))
            mod_r.record(C.right(f, ab) == C.right(C.right(f, a), b), (a, b, f))
            bimod.record(C.right(C.left(a, f), b) == C.left(a, C.right(f, b)), (a, b, f))
    for a, ea in bbasis:
        da = B.delta(ea)
        for f, g in iproduct(cbasis, cbasis):
            if deg(f) + deg(g) > cmaxdeg:
                continue
            fg = C.mul(f, g)
            lhs_l = C.left(a, fg)
            lhs_r = C.right(fg, a)
            rhs_l = Poly({}, C.tcap)
            rhs_r = Poly({}, C.tcap)
            for (m1, m2), c in da.terms.items():
                a1, a2 = Poly.from_mono(m1), Poly.from_mono(m2)
                rhs_l = rhs_l + C.mul(C.left(a1, f), C.left(a2, g)) * c
                rhs_r = rhs_r + C.mul(C.right(f, a1), C.right(g, a2)) * c
            alg_l.record(lhs_l == rhs_l, (a, f, g))
            alg_r.record(lhs_r == rhs_r, (a, f, g))
    if C.coproduct is not None:
        coal_l = Check("left_module_coalgebra")
        coal_r = Check("right_module_coalgebra")
        checks += [coal_l, coal_r]
        for a, ea in bbasis:
            da = B.delta(ea)
            for f in C.basis(cmaxdeg, with_t=True):
                df = C.coproduct(f)
                lhs_l = C.coproduct(C.left(a, f))
                lhs_r = C.coproduct(C.right(f, a))
                rhs_l = TensorElement.zero(df.carriers, None, C.tcap)
                rhs_r = TensorElement.zero(df.carriers, None, C.tcap)
                for (m1, m2), c in da.terms.items():
                    a1, a2 = Poly.from_mono(m1), Poly.from_mono(m2)
                    for (f1, f2), c2 in df.terms.items():
                        p1, p2 = Poly.from_mono(f1), Poly.from_mono(f2)
                        rhs_l = rhs_l + TensorElement.pure(C.left(a1, p1), C.left(a2, p2), carriers=df.carriers,
                                                           scalar_leg=None, tcap=C.tcap).scale(c * c2)
                        rhs_r = rhs_r + TensorElement.pure(C.right(p1, a1), C.right(p2, a2), carriers=df.carriers,
                                                           scalar_leg=None, tcap=C.tcap).scale(c * c2)
                coal_l.record(lhs_l == rhs_l, (a, f))
                coal_r.record(lhs_r == rhs_r, (a, f))
    return report(checks)

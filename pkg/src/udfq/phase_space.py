"""lambda-ordered products on T*(R^n) and T*(G), directly and as L-R smash products.

Phase-space functions are polynomials in q1..qn (base), p1..pn (fibre) and t.
The C leg of C⊗B carries q and t, the B leg carries p.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import factorial

from .exactalg import T, Poly, TensorElement, monomials_upto, poly_to_tensor, tensor_to_poly
from .hopf import Bialgebra, BimoduleAlgebra, iterated_actions, make_enveloping_bialgebra, make_symmetric_bialgebra
from .smash import CB, SmashAlgebra
from .udf import GroupDescriptor, InvariantProduct


@dataclass(frozen=True)
class LambdaConfig:
    lam: Fraction
    n: int = 1
    tcap: int | None = 4

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def out_of_range(self) -> bool:
        """lambda outside [0, 1]: the formulas still apply but no ordering is named."""
        return not 0 <= self.lam <= 1

    @property
    def q(self) -> tuple[str, ...]:
        return tuple(f"q{i + 1}" for i in range(self.n))

    @property
    def p(self) -> tuple[str, ...]:
        return tuple(f"p{i + 1}" for i in range(self.n))


def _tpow(k: int) -> Poly:
    return Poly.var(T, k) if k else Poly.const(1)


# ---------------------------------------------------------------------------
# Actions


def lr_actions(cfg: LambdaConfig, group: GroupDescriptor | None = None, t_in_c: bool = False) -> BimoduleAlgebra:
    """C = polynomials in q (and t) with X ⇀ f = t(λ-1) X~f and f ↼ X = tλ X-f.

    Without a group, G = R^n and both fields are d/dq_i acting by S(R^n).
    With a group, B = U_t(g) with g read off the group law; the fields are
    the left- and right-invariant fields in the group's coordinates, which
    must be q1..qn. With t_in_c the coalgebra data of the Hopf structure on
    C^inf(R^n)[[t]] is attached (Delta(t) = t⊗1 + 1⊗t).
    """
    lam, tcap = cfg.lam, cfg.tcap
    tl = Poly.var(T) * (lam - 1)
    tr = Poly.var(T) * lam
    if group is None:
        B = make_symmetric_bialgebra(cfg.n, tcap=tcap, symbols=cfg.p)
        left = {p: (lambda f, q=q: (tl * f.diff(q)).truncate(tcap)) for q, p in zip(cfg.q, cfg.p)}
        right = {p: (lambda f, q=q: (tr * f.diff(q)).truncate(tcap)) for q, p in zip(cfg.q, cfg.p)}
    else:
        if group.coords != cfg.q:
            raise ValueError(f"group coordinates must be {cfg.q}")
        B = make_enveloping_bialgebra(group.lie_algebra(cfg.p), tcap=tcap, symbols=cfg.p)
        left, right = {}, {}
        for i, p in enumerate(cfg.p):
            lf, rf = group.left_field(i), group.right_field(i)
            left[p] = lambda f, lf=lf: (tl * group.apply_field(lf, f)).truncate(tcap)
            right[p] = lambda f, rf=rf: (tr * group.apply_field(rf, f)).truncate(tcap)
    left_mono, right_mono = iterated_actions(B, left, right, tcap)
    C = BimoduleAlgebra(B=B, variables=cfg.q, left_mono=left_mono, right_mono=right_mono, tcap=tcap,
                        name="C(q)")
    if t_in_c:
        if group is not None:
            raise ValueError("the additive Hopf structure on C needs the abelian group")
        C.coproduct = lambda f: additive_coproduct(f, cfg.q, tcap)
        C.counit = lambda f: additive_counit(f, cfg.q)
        C.antipode = lambda f: additive_antipode(f, cfg.q)
    return C


def additive_coproduct(f: Poly, names, tcap=None) -> TensorElement:
    """Delta(f)(x, y) = f(x + y) with t -> t1 + t2, split into two legs."""
    sub = {}
    for v in tuple(names) + (T,):
        sub[v] = Poly.var(f"{v}__1") + Poly.var(f"{v}__2")
    doubled = f.substitute(sub)

    def leg_of(name):
        base, _, leg = name.rpartition("__")
        return int(leg) - 1, base

    return poly_to_tensor(doubled, leg_of, ("C", "C"), scalar_leg=None, tcap=tcap)


def additive_counit(f: Poly, names) -> Poly:
    return Poly.const(f.substitute({v: Poly.const(0) for v in tuple(names) + (T,)}).const_term())


def additive_antipode(f: Poly, names) -> Poly:
    return f.substitute({v: -Poly.var(v) for v in tuple(names) + (T,)})


# ---------------------------------------------------------------------------
# Products


def lambda_star_direct(cfg: LambdaConfig, u: Poly, v: Poly) -> Poly:
    """sum t^{|l|+|m|}/(l! m!) λ^|m| (λ-1)^|l| d_q^m d_p^l u · d_q^l d_p^m v."""
    lam, n, tcap = cfg.lam, cfg.n, cfg.tcap
    qs, ps = cfg.q, cfg.p
    out = Poly({}, tcap)
    dmax_u = [max(u.degree([p]), 0) for p in ps]
    dmax_v = [max(v.degree([p]), 0) for p in ps]
    for ls in iproduct(*(range(d + 1) for d in dmax_u)):
        for ms in iproduct(*(range(d + 1) for d in dmax_v)):
            order = sum(ls) + sum(ms)
            if tcap is not None and order > tcap:
                continue
            du, dv = u, v
            coef = Fraction(1)
            for i in range(n):
                du = du.diff(qs[i], ms[i]).diff(ps[i], ls[i])
                dv = dv.diff(qs[i], ls[i]).diff(ps[i], ms[i])
                coef /= factorial(ls[i]) * factorial(ms[i])
            if du.is_zero() or dv.is_zero():
                continue
            coef *= lam ** sum(ms) * (lam - 1) ** sum(ls)
            if coef:
                out = out + du * dv * _tpow(order) * coef
    return out.truncate(tcap)


def bidifferential_term(k: int, lam, u, v, qs, ps):
    """Coefficient of t^k of the lambda-ordered product on sympy expressions u, v."""
    import sympy as sp

    lam = sp.nsimplify(lam)
    n = len(qs)
    out = sp.Integer(0)
    for split in iproduct(range(k + 1), repeat=2 * n):
        ls, ms = split[:n], split[n:]
        if sum(ls) + sum(ms) != k:
            continue
        du, dv = u, v
        coef = sp.Integer(1)
        for i in range(n):
            du = sp.diff(du, qs[i], ms[i], ps[i], ls[i]) if ms[i] or ls[i] else du
            dv = sp.diff(dv, qs[i], ls[i], ps[i], ms[i]) if ms[i] or ls[i] else dv
            coef /= factorial(ls[i]) * factorial(ms[i])
        out += coef * lam ** sum(ms) * (lam - 1) ** sum(ls) * du * dv
    return out


def weyl_moyal_star(n: int, u: Poly, v: Poly, tcap: int | None = 4) -> Poly:
    """Moyal product exp((t/2) P)(u ⊗ v) with P = sum d_qi ⊗ d_pi - d_pi ⊗ d_qi.

    Powers of P are expanded as a bidifferential operator on doubled variables,
    independently of the lambda-ordered formula.
    """
    qs = [f"q{i + 1}" for i in range(n)]
    ps = [f"p{i + 1}" for i in range(n)]
    # P as a list of ((left derivative), (right derivative), sign)
    gens = [((q,), (p,), 1) for q, p in zip(qs, ps)] + [((p,), (q,), -1) for q, p in zip(qs, ps)]
    # P^k as {(left multi-derivative, right multi-derivative): coeff}
    power = {((), ()): Fraction(1)}
    out = (u * v).truncate(tcap)
    kmax = min(max(u.degree(), 0), max(v.degree(), 0))
    if tcap is not None:
        kmax = min(kmax, tcap)
    for k in range(1, kmax + 1):
        nxt: dict = {}
        for (dl, dr), c in power.items():
            for gl, gr, s in gens:
                key = (tuple(sorted(dl + gl)), tuple(sorted(dr + gr)))
                nxt[key] = nxt.get(key, 0) + c * s
        power = {key: c for key, c in nxt.items() if c}
        term = Poly({})
        for (dl, dr), c in power.items():
            du, dv = u, v
            for x in dl:
                du = du.diff(x)
            for x in dr:
                dv = dv.diff(x)
            if not du.is_zero() and not dv.is_zero():
                term = term + du * dv * c
        out = out + term * _tpow(k) * (Fraction(1, 2 ** k) / factorial(k))
    return out.truncate(tcap)


def split_phase(u: Poly, cfg: LambdaConfig) -> TensorElement:
    """u(q, p, t) -> sum f(q, t) ⊗ p^r."""
    p = set(cfg.p)
    return poly_to_tensor(u, lambda name: (1, name) if name in p else (0, name), CB, scalar_leg=0, tcap=cfg.tcap)


def join_phase(x: TensorElement) -> Poly:
    return tensor_to_poly(x)


class LambdaSmash:
    """Caches the smash algebra for a configuration."""

    _cache: dict = {}

    @classmethod
    def get(cls, cfg: LambdaConfig, group: GroupDescriptor | None = None) -> SmashAlgebra:
        key = (cfg, group)
        if key not in cls._cache:
            cls._cache[key] = SmashAlgebra(lr_actions(cfg, group), "lr", tcap=cfg.tcap)
        return cls._cache[key]


def lambda_star_smash(cfg: LambdaConfig, u: Poly, v: Poly, group: GroupDescriptor | None = None) -> Poly:
    A = LambdaSmash.get(cfg, group)
    return join_phase(A.mul(split_phase(u, cfg), split_phase(v, cfg)))


def lambda_product(cfg: LambdaConfig, engine: str = "direct") -> InvariantProduct:
    """The lambda-star as a product on R^{2n} with coordinates (q, p)."""
    fn = {"direct": lambda_star_direct, "smash": lambda_star_smash}[engine]
    return InvariantProduct(f"lambda={cfg.lam}", cfg.q + cfg.p, lambda u, v: fn(cfg, u, v), cfg.tcap,
                            "translation invariant (constant coefficients)")


def poisson_bracket(u: Poly, v: Poly, n: int | None = None) -> Poly:
    if n is None:
        idx = [int(x[1:]) for x in u.variables + v.variables if x[0] in "qp" and x[1:].isdigit()]
        n = max(idx, default=0)
    out = Poly({})
    for i in range(1, n + 1):
        q, p = f"q{i}", f"p{i}"
        out = out + u.diff(q) * v.diff(p) - u.diff(p) * v.diff(q)
    return out


def first_order_expected(cfg: LambdaConfig, u: Poly, v: Poly) -> Poly:
    """λ d_q u d_p v + (λ - 1) d_p u d_q v summed over i."""
    out = Poly({})
    for q, p in zip(cfg.q, cfg.p):
        out = out + u.diff(q) * v.diff(p) * cfg.lam + u.diff(p) * v.diff(q) * (cfg.lam - 1)
    return out


# ---------------------------------------------------------------------------
# Hopf structure on the phase-space algebra


def phase_space_smash(cfg: LambdaConfig) -> SmashAlgebra:
    """C^inf(R^n)[[t]] ♮ S(R^n) with t inside C and the additive coproduct."""
    return SmashAlgebra(lr_actions(cfg, t_in_c=True), "lr", tcap=cfg.tcap)


def phase_space_hopf(cfg: LambdaConfig) -> Bialgebra:
    return phase_space_smash(cfg).as_bialgebra()


def corrupted_hopf(cfg: LambdaConfig) -> Bialgebra:
    """Same algebra with Delta(1⊗p_i) replaced by (1⊗p_i)⊗(1⊗p_i)."""
    A = phase_space_smash(cfg)
    B = A.as_bialgebra()
    good = B.coproduct
    p1 = Poly.var(cfg.p[0])

    def bad(x):
        if x == A.element(Poly.const(1), p1):
            return TensorElement({((), p1.monomials()[0], (), p1.monomials()[0]): 1}, CB + CB, None, A.tcap)
        return good(x)

    B.coproduct = bad
    B.name += " (corrupted)"
    return B


def coalgebra_map_defects(cfg: LambdaConfig, maxdeg: int = 3) -> list[str]:
    """Delta_t(X ⇀ f) = Delta_B(X) ⇀ Delta_t(f) and the mirrored right law on t^k q^a."""
    C = lr_actions(cfg, t_in_c=True)
    bad = []
    names = cfg.q + (T,)
    for m in monomials_upto(names, maxdeg):
        f = Poly.from_mono(m)
        df = C.coproduct(f)
        for p in cfg.p:
            X = Poly.var(p)
            for side in ("left", "right"):
                act = (lambda a, g: C.left(a, g)) if side == "left" else (lambda a, g: C.right(g, a))
                lhs = C.coproduct(act(X, f))
                rhs = TensorElement.zero(("C", "C"), None, cfg.tcap)
                for (f1, f2), c in df.terms.items():
                    g1, g2 = Poly.from_mono(f1), Poly.from_mono(f2)
                    rhs = rhs + TensorElement.pure(act(X, g1), g2, carriers=("C", "C"), scalar_leg=None,
                                                   tcap=cfg.tcap).scale(c)
                    rhs = rhs + TensorElement.pure(g1, act(X, g2), carriers=("C", "C"), scalar_leg=None,
                                                   tcap=cfg.tcap).scale(c)
                if lhs != rhs:
                    bad.append(f"{side} action of {p} on {f}")
    return bad


def heisenberg_generators_primitive(cfg: LambdaConfig) -> dict:
    """At λ=1/2 the generators q_i⊗1, 1⊗p_i, t(1⊗1) are primitive and satisfy
    the Heisenberg relations [q_i, p_i] = t with t central."""
    A = phase_space_smash(cfg)
    one = Poly.const(1)
    gens = [A.element(Poly.var(q), one) for q in cfg.q] + [A.element(one, Poly.var(p)) for p in cfg.p]
    gens.append(A.element(Poly.var(T), one))
    unit = A.one()
    prim = True
    for x in gens:
        d = A.coproduct(x)
        expected = _outer(x, unit) + _outer(unit, x)
        prim &= d == expected
    tt = gens[-1]
    rel = True
    for i in range(cfg.n):
        qx, px = gens[i], gens[cfg.n + i]
        rel &= A.mul(qx, px) - A.mul(px, qx) == tt
        for x in gens:
            rel &= A.mul(x, tt) == A.mul(tt, x)
    return {"primitive": prim, "relations": rel}


def _outer(x: TensorElement, y: TensorElement) -> TensorElement:
    out = {}
    for kx, cx in x.terms.items():
        for ky, cy in y.terms.items():
            k = kx + ky
            out[k] = out.get(k, 0) + cx * cy
    return TensorElement(out, CB + CB, None, x.tcap)

"""Groups with polynomial laws, invariant products and universal deformation formulas.

Group laws are polynomial maps written in x1..xn (left factor) and y1..yn
(right factor). Functions on the group use the descriptor's own coordinate
names, so a law can be reused for any choice of coordinate symbols.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Sequence

from .exactalg import T, Poly, monomials_upto
from .hopf import LieAlgebra


def _xs(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]


def _vars(prefix: str, n: int) -> list[Poly]:
    return [Poly.var(v) for v in _xs(prefix, n)]


class GroupDescriptor:
    """Simply connected group with a polynomial law in global coordinates."""

    def __init__(self, mul: Sequence[Poly], inv: Sequence[Poly], coords: Sequence[str] | None = None,
                 name: str = "G"):
        self.dim = len(mul)
        if len(inv) != self.dim:
            raise ValueError("inverse and multiplication have different dimensions")
        self.mul = [p if isinstance(p, Poly) else Poly.parse(str(p)) for p in mul]
        self.inv = [p if isinstance(p, Poly) else Poly.parse(str(p)) for p in inv]
        self.coords = tuple(coords or _xs("x", self.dim))
        if len(self.coords) != self.dim:
            raise ValueError("number of coordinates does not match dim")
        allowed = set(_xs("x", self.dim) + _xs("y", self.dim))
        for p in self.mul:
            if not set(p.variables) <= allowed:
                raise ValueError(f"group law uses unexpected variables: {p.variables}")
        for p in self.inv:
            if not set(p.variables) <= set(_xs("x", self.dim)):
                raise ValueError(f"inversion uses unexpected variables: {p.variables}")
        self.name = name

    @classmethod
    def abelian(cls, n: int, coords: Sequence[str] | None = None, name: str = "R^n") -> "GroupDescriptor":
        x, y = _vars("x", n), _vars("y", n)
        return cls([a + b for a, b in zip(x, y)], [-a for a in x], coords, name)

    @classmethod
    def parse(cls, text: str) -> "GroupDescriptor":
        """``dim n``, optional ``name``/``coords`` lines, then ``mul <poly>`` and ``inv <poly>`` lines."""
        dim = None
        mul, inv, coords, name = [], [], None, "G"
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, _, rest = line.partition(" ")
            if head == "dim":
                dim = int(rest)
            elif head == "coords":
                coords = rest.split()
            elif head == "name":
                name = rest.strip()
            elif head == "mul":
                mul.append(Poly.parse(rest))
            elif head == "inv":
                inv.append(Poly.parse(rest))
            else:
                raise ValueError(f"unknown line in group file: {line!r}")
        if dim is None or len(mul) != dim or len(inv) != dim:
            raise ValueError("group file needs 'dim n' followed by n 'mul' and n 'inv' lines")
        g = cls(mul, inv, coords, name)
        report = g.check_laws()
        if not all(report.values()):
            raise ValueError(f"group axioms fail: {report}")
        return g

    def compose(self, g: Sequence[Poly], h: Sequence[Poly]) -> list[Poly]:
        sub = {}
        for i in range(self.dim):
            sub[f"x{i + 1}"] = g[i]
            sub[f"y{i + 1}"] = h[i]
        return [p.substitute(sub) for p in self.mul]

    def inverse(self, g: Sequence[Poly]) -> list[Poly]:
        sub = {f"x{i + 1}": g[i] for i in range(self.dim)}
        return [p.substitute(sub) for p in self.inv]

    def identity(self) -> list[Poly]:
        return [Poly.const(0)] * self.dim

    def check_laws(self) -> dict[str, bool]:
        n = self.dim
        a, b, c = _vars("_a", n), _vars("_b", n), _vars("_c", n)
        e = self.identity()
        return {
            "left_identity": self.compose(e, a) == a,
            "right_identity": self.compose(a, e) == a,
            "left_inverse": self.compose(self.inverse(a), a) == e,
            "right_inverse": self.compose(a, self.inverse(a)) == e,
            "associativity": self.compose(self.compose(a, b), c) == self.compose(a, self.compose(b, c)),
        }

    def point(self, values: Sequence) -> list[Poly]:
        return [v if isinstance(v, Poly) else Poly.const(v) for v in values]

    def coordinate_polys(self) -> list[Poly]:
        return [Poly.var(c) for c in self.coords]

    def symbolic_element(self, prefix: str = "_g") -> list[Poly]:
        return _vars(prefix, self.dim)

    def left_field(self, i: int) -> list[Poly]:
        """Coefficients of the left-invariant field with value e_i at the identity."""
        sub = {f"x{k + 1}": Poly.var(self.coords[k]) for k in range(self.dim)}
        sub.update({f"y{k + 1}": Poly.const(0) for k in range(self.dim)})
        return [m.diff(f"y{i + 1}").substitute(sub) for m in self.mul]

    def right_field(self, i: int) -> list[Poly]:
        """Coefficients of the right-invariant field with value e_i at the identity."""
        sub = {f"y{k + 1}": Poly.var(self.coords[k]) for k in range(self.dim)}
        sub.update({f"x{k + 1}": Poly.const(0) for k in range(self.dim)})
        return [m.diff(f"x{i + 1}").substitute(sub) for m in self.mul]

    def apply_field(self, field_coeffs: Sequence[Poly], u: Poly) -> Poly:
        out = Poly({}, u.tcap)
        for c, name in zip(field_coeffs, self.coords):
            if not c.is_zero():
                out = out + c * u.diff(name)
        return out

    def lie_algebra(self, names: Sequence[str] | None = None) -> LieAlgebra:
        """Bracket from the second-order part of the law: [e_i, e_j] = B(e_i,e_j) - B(e_j,e_i)."""
        n = self.dim
        zero = {v: Poly.const(0) for v in _xs("x", n) + _xs("y", n)}
        entries = []
        for i, j, k in iproduct(range(n), repeat=3):
            m = self.mul[k]
            c = (m.diff(f"x{i + 1}").diff(f"y{j + 1}").substitute(zero).const_term()
                 - m.diff(f"x{j + 1}").diff(f"y{i + 1}").substitute(zero).const_term())
            if c:
                entries.append((i, j, k, c))
        return LieAlgebra.from_table(names or [f"p{i + 1}" for i in range(n)], entries)

    def __repr__(self):
        return f"GroupDescriptor({self.name}, dim={self.dim}, coords={self.coords})"


def heisenberg_group(coords=("q1", "q2", "q3")) -> GroupDescriptor:
    """(x,y,z)(x',y',z') = (x+x', y+y', z+z'+(xy'-yx')/2)."""
    x1, x2, x3 = _vars("x", 3)
    y1, y2, y3 = _vars("y", 3)
    half = Fraction(1, 2)
    return GroupDescriptor([x1 + y1, x2 + y2, x3 + y3 + (x1 * y2 - x2 * y1) * half],
                           [-x1, -x2, -x3], coords, "heisenberg")


@dataclass
class ActionDescriptor:
    """Polynomial action tau(g, y); law in x1..xn (group) and y1..ym (point)."""

    G: GroupDescriptor
    action: list[Poly]
    coords: tuple[str, ...]

    def __post_init__(self):
        self.coords = tuple(self.coords)
        if len(self.action) != len(self.coords):
            raise ValueError("action components and coordinates differ in number")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def apply(self, g: Sequence[Poly], pt: Sequence[Poly]) -> list[Poly]:
        sub = {f"x{i + 1}": g[i] for i in range(self.G.dim)}
        sub.update({f"y{j + 1}": pt[j] for j in range(self.dim)})
        return [p.substitute(sub) for p in self.action]

    def check_laws(self) -> dict[str, bool]:
        g, h = _vars("_a", self.G.dim), _vars("_b", self.G.dim)
        y = _vars("_c", self.dim)
        return {
            "identity": self.apply(self.G.identity(), y) == y,
            "compatibility": self.apply(g, self.apply(h, y)) == self.apply(self.G.compose(g, h), y),
        }

    def fundamental_field(self, i: int) -> list[Poly]:
        """X*_i = d/ds at 0 of u(tau(exp(-s e_i), y)), as coefficients on M's coordinates."""
        sub = {f"x{k + 1}": Poly.const(0) for k in range(self.G.dim)}
        sub.update({f"y{j + 1}": Poly.var(self.coords[j]) for j in range(self.dim)})
        return [-(p.diff(f"x{i + 1}").substitute(sub)) for p in self.action]


def translation_action(G: GroupDescriptor) -> ActionDescriptor:
    """G acting on itself by left multiplication, with G's coordinates on M."""
    n = G.dim
    sub = {f"x{i + 1}": Poly.var(f"x{i + 1}") for i in range(n)}
    return ActionDescriptor(G, [m.substitute(sub) for m in G.mul], G.coords)


@dataclass
class InvariantProduct:
    """A bilinear product on polynomials in `coords` (t is the deformation parameter)."""

    name: str
    coords: tuple[str, ...]
    product: Callable[[Poly, Poly], Poly]
    tcap: int | None = None
    certificate: str = "unverified"

    def __call__(self, u: Poly, v: Poly) -> Poly:
        return self.product(u, v)


def pointwise_product(coords: Sequence[str], tcap=None) -> InvariantProduct:
    return InvariantProduct("pointwise", tuple(coords), lambda u, v: (u * v).truncate(tcap), tcap)


def left_translate(G: GroupDescriptor, g: Sequence, u: Poly) -> Poly:
    """(L_g^* u)(x) = u(g x)."""
    g = G.point(g)
    new = G.compose(g, G.coordinate_polys())
    return u.substitute(dict(zip(G.coords, new)))


def _rename_to(P: InvariantProduct, G: GroupDescriptor):
    if len(P.coords) != G.dim:
        raise ValueError("product and group dimensions differ")
    return dict(zip(G.coords, P.coords)), dict(zip(P.coords, G.coords))


def udf_transport(P: InvariantProduct, A: ActionDescriptor, u: Poly, v: Poly,
                  group_coords: Sequence[str] | None = None) -> Poly:
    """u ⋆^M v (x) = (alpha^x u ⋆ alpha^x v)(e), alpha^x(u)(g) = u(tau(g^-1, x))."""
    G = A.G
    gvars = list(group_coords or P.coords)
    if len(gvars) != G.dim:
        raise ValueError("product coordinates do not match the group dimension")
    pts = _xs("_m", A.dim)
    g = [Poly.var(c) for c in gvars]
    moved = A.apply(G.inverse(g), [Poly.var(p) for p in pts])
    sub = dict(zip(A.coords, moved))
    au, av = u.substitute(sub), v.substitute(sub)
    prod = P(au, av)
    at_e = prod.substitute({c: Poly.const(0) for c in gvars})
    return at_e.rename(dict(zip(pts, A.coords)))


def transported_product(P: InvariantProduct, A: ActionDescriptor, name: str | None = None) -> InvariantProduct:
    return InvariantProduct(name or f"udf[{P.name}]", A.coords, lambda u, v: udf_transport(P, A, u, v), P.tcap)


# ---------------------------------------------------------------------------
# Poisson bivectors


@dataclass
class Bivector:
    coords: tuple[str, ...]
    matrix: list[list[Poly]]

    def __eq__(self, other):
        return isinstance(other, Bivector) and self.coords == other.coords and all(
            a == b for ra, rb in zip(self.matrix, other.matrix) for a, b in zip(ra, rb))

    def bracket(self, u: Poly, v: Poly) -> Poly:
        out = Poly({})
        n = len(self.coords)
        for i in range(n):
            du = u.diff(self.coords[i])
            if du.is_zero():
                continue
            for j in range(n):
                if not self.matrix[i][j].is_zero():
                    out = out + self.matrix[i][j] * du * v.diff(self.coords[j])
        return out

    def is_antisymmetric(self) -> bool:
        n = len(self.coords)
        return all(self.matrix[i][j] == -self.matrix[j][i] for i in range(n) for j in range(n))

    def jacobi_defect(self) -> list[tuple[int, int, int]]:
        """Indices where sum_cyc pi^{il} d_l pi^{jk} is nonzero ([pi, pi] = 0 test)."""
        n = len(self.coords)
        bad = []
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    s = Poly({})
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        for l in range(n):
                            s = s + self.matrix[a][l] * self.matrix[b][c].diff(self.coords[l])
                    if not s.is_zero():
                        bad.append((i, j, k))
        return bad

    def is_poisson(self) -> bool:
        return self.is_antisymmetric() and not self.jacobi_defect()

    def at(self, values: dict) -> list[list]:
        sub = {k: Poly.const(v) for k, v in values.items()}
        return [[p.substitute(sub) for p in row] for row in self.matrix]

    def __str__(self):
        parts = []
        for i, a in enumerate(self.coords):
            for j, b in enumerate(self.coords):
                if i < j and not self.matrix[i][j].is_zero():
                    parts.append(f"({self.matrix[i][j]}) d{a}^d{b}")
        return " + ".join(parts) or "0"


def canonical_bivector(n: int) -> Bivector:
    coords = tuple(f"q{i + 1}" for i in range(n)) + tuple(f"p{i + 1}" for i in range(n))
    m = [[Poly.const(0)] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        m[i][n + i] = Poly.const(1)
        m[n + i][i] = Poly.const(-1)
    return Bivector(coords, m)


class NotBidifferential(ValueError):
    pass


def extract_poisson(P: InvariantProduct, check_degree: int = 2) -> Bivector:
    """pi^{ij} = B1(x_i, x_j) - B1(x_j, x_i), B1 the t-linear part of the product.

    The antisymmetrized first-order part is compared with the biderivation
    defined by pi on all monomial pairs up to check_degree; a mismatch means
    the first-order term is not a bivector and raises NotBidifferential.
    """
    coords = P.coords
    n = len(coords)

    def b1(u, v):
        return P(u, v).coeff_t(1)

    xs = [Poly.var(c) for c in coords]
    m = [[b1(xs[i], xs[j]) - b1(xs[j], xs[i]) for j in range(n)] for i in range(n)]
    pi = Bivector(tuple(coords), m)
    basis = [Poly.from_mono(mm) for mm in monomials_upto(coords, check_degree, 1)]
    for u in basis:
        for v in basis:
            anti = b1(u, v) - b1(v, u)
            if anti != pi.bracket(u, v):
                raise NotBidifferential(f"first-order part is not a biderivation at ({u}, {v})")
    return pi


def pushforward_bivector(w_e: Sequence[Sequence], A: ActionDescriptor) -> Bivector:
    """w^M = sum_{ij} w_e^{ij} X*_i ⊗ X*_j for an antisymmetric matrix w_e."""
    fields = [A.fundamental_field(i) for i in range(A.G.dim)]
    m = A.dim
    out = [[Poly.const(0)] * m for _ in range(m)]
    for i in range(A.G.dim):
        for j in range(A.G.dim):
            w = w_e[i][j]
            w = w if isinstance(w, Poly) else Poly.const(w)
            if w.is_zero():
                continue
            for a in range(m):
                for b in range(m):
                    out[a][b] = out[a][b] + w * fields[i][a] * fields[j][b]
    return Bivector(A.coords, out)


# ---------------------------------------------------------------------------
# Induction from a normal factor


def semidirect_group(q_dim: int, s_dim: int, action_matrix: Sequence[Sequence[Poly]] | None,
                     coords: Sequence[str], name: str) -> GroupDescriptor:
    """G = Q ⋊ S with Q, S abelian and S acting on Q by a unipotent matrix A(s).

    Coordinates (q, s) correspond to the element q·s; the law is
    (q, s)(q', s') = (q + A(s) q', s + s'), which needs A(s)A(s') = A(s + s').
    Entries of action_matrix are polynomials in s1..s_{s_dim}.
    """
    n = q_dim + s_dim
    x, y = _vars("x", n), _vars("y", n)
    s_sub = {f"s{k + 1}": x[q_dim + k] for k in range(s_dim)}
    s_inv = {f"s{k + 1}": -x[q_dim + k] for k in range(s_dim)}
    mul, inv = [], []
    for i in range(q_dim):
        row = action_matrix[i] if action_matrix else [Fraction(int(i == j)) for j in range(q_dim)]
        acc = x[i]
        acc_inv = Poly.const(0)
        for j in range(q_dim):
            a = row[j] if isinstance(row[j], Poly) else Poly.const(row[j])
            acc = acc + a.substitute(s_sub) * y[j]
            acc_inv = acc_inv - a.substitute(s_inv) * x[j]
        mul.append(acc)
        inv.append(acc_inv)
    for k in range(s_dim):
        mul.append(x[q_dim + k] + y[q_dim + k])
        inv.append(-x[q_dim + k])
    return GroupDescriptor(mul, inv, coords, name)


def induction_product(q_coords: Sequence[str], P_S: InvariantProduct, u: Poly, v: Poly) -> Poly:
    """u ⋆ v (q, s) = (u(q, .) ⋆^S v(q, .))(s), fiberwise in the Q coordinates."""
    q_coords = list(q_coords)
    if set(q_coords) & set(P_S.coords):
        raise ValueError("Q and S coordinates overlap")
    # anything that is not an S coordinate (Q coordinates, symbolic group
    # parameters) is a scalar on the fiber
    fiber = set(P_S.coords) | {T}
    params = sorted((set(u.variables) | set(v.variables)) - fiber - set(q_coords))
    cu, cv = u.collect(q_coords + params), v.collect(q_coords + params)
    out = Poly({}, P_S.tcap)
    for mu, fu in cu.items():
        for mv, fv in cv.items():
            out = out + Poly.from_mono(mu) * Poly.from_mono(mv) * P_S(fu, fv)
    return out.truncate(P_S.tcap)


def induced_product(q_coords: Sequence[str], P_S: InvariantProduct) -> InvariantProduct:
    coords = tuple(q_coords) + tuple(P_S.coords)
    return InvariantProduct(f"induced[{P_S.name}]", coords,
                            lambda u, v: induction_product(q_coords, P_S, u, v), P_S.tcap)


# ---------------------------------------------------------------------------
# Checks


def check_left_invariance(P: InvariantProduct, G: GroupDescriptor, maxdeg: int,
                          witness_point: Sequence | None = None) -> dict:
    """L_g^*u ⋆ L_g^*v = L_g^*(u ⋆ v) with g symbolic, on monomial pairs up to maxdeg."""
    if tuple(P.coords) != G.coords:
        raise ValueError("product coordinates must match the group coordinates")
    g = G.symbolic_element()
    basis = [Poly.from_mono(m) for m in monomials_upto(G.coords, maxdeg)]
    checked = 0
    for u in basis:
        lu = left_translate(G, g, u)
        for v in basis:
            if u.degree() + v.degree() > maxdeg:
                continue
            checked += 1
            lhs = P(lu, left_translate(G, g, v))
            rhs = left_translate(G, g, P(u, v))
            if lhs != rhs:
                witness = None
                diff = lhs - rhs
                pt = witness_point or [1] * G.dim
                subs = {f"_g{i + 1}": Poly.const(c) for i, c in enumerate(pt)}
                if not diff.substitute(subs).is_zero():
                    witness = list(pt)
                return {"pass": False, "checked": checked, "pair": (str(u), str(v)),
                        "difference": str(diff), "witness_g": witness}
    return {"pass": True, "checked": checked}


def check_associativity(P: InvariantProduct, maxdeg: int, names: Sequence[str] | None = None) -> dict:
    names = tuple(names or P.coords)
    basis = [Poly.from_mono(m) for m in monomials_upto(names, maxdeg)]
    cache: dict = {}

    def mul(a, b):
        key = (a, b)
        if key not in cache:
            cache[key] = P(a, b)
        return cache[key]

    checked = 0
    for u in basis:
        for v in basis:
            if u.degree() + v.degree() > maxdeg:
                continue
            uv = mul(u, v)
            for w in basis:
                if u.degree() + v.degree() + w.degree() > maxdeg:
                    continue
                checked += 1
                if P(uv, w) != P(u, mul(v, w)):
                    return {"pass": False, "checked": checked, "triple": (str(u), str(v), str(w))}
    return {"pass": True, "checked": checked}


def fake_product(coords: Sequence[str], tcap=None) -> InvariantProduct:
    """u v + t x_1 d_1u d_1v: an explicitly non-invariant deformation for negative controls."""
    x = coords[0]
    return InvariantProduct("fake", tuple(coords),
                            lambda u, v: (u * v + Poly.var(T) * Poly.var(x) * u.diff(x) * v.diff(x)).truncate(tcap),
                            tcap)

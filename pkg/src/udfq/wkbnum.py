"""Oscillatory WKB product on rank-one (and flat) elementary spaces.

Chart: x = (a, l) in a x l with a, l one-dimensional. With twisting map phi the
three-point phase is S = cyc-sum phi(a0 - a1) l2 and the amplitude is
phi'(a1 - a2). The product is

    u * v (x0) = c / hbar^2 ... = 1/(pi hbar)^2 ∫∫ u(x1) v(x2) A(x1, x2) exp(2i S / hbar) dx1 dx2.

Because S is linear in l1 and l2 the l-integrals are partial Fourier
transforms. Substituting s = (2/hbar) phi(.) turns the remaining a-integrals
into smooth integrals, evaluated with tensor Gauss–Legendre quadrature and a
node-doubling error estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable

import numpy as np
import sympy as sp

EPS = np.finfo(float).eps


# ---------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class WkbSpace:
    name: str
    phi: Callable          # twisting map (odd, increasing)
    dphi: Callable         # phi'
    phi_inv: Callable
    dphi_inv: Callable     # (phi^{-1})'
    phi_expr: sp.Expr = None
    xi_norm: float = 1.0   # xi(sinh(a) l) = xi_norm * phi(a) * l for the unit l vector
    kernel_const: str = "1/(pi hbar)^2"

    @property
    def dims(self) -> int:
        return 1


def _space_from_expr(name: str, expr: sp.Expr, a: sp.Symbol) -> WkbSpace:
    y = sp.Symbol("y", real=True)
    known = {sp.sinh(a): sp.asinh(y), a: y}
    if expr in known:
        sols = [known[expr]]
    else:
        sols = [s for s in sp.solve(sp.Eq(y, expr), a)
                if all(abs(complex(expr.subs(a, s.subs(y, y0)).evalf()) - y0) < 1e-12 for y0 in (-1.5, 0.3, 2.0))]
    if not sols:
        raise ValueError(f"cannot invert twisting map {expr}")
    inv = sols[0]
    mods = ["numpy"]
    return WkbSpace(
        name,
        sp.lambdify(a, expr, mods),
        sp.lambdify(a, sp.diff(expr, a), mods),
        sp.lambdify(y, inv, mods),
        sp.lambdify(y, sp.diff(inv, y), mods),
        phi_expr=expr,
    )


@lru_cache(maxsize=None)
def rank_one_space() -> WkbSpace:
    """Twisting map taken from the exact structure solve (phi = sinh)."""
    from .structure import rank_one_instance, twist_solve

    tw = twist_solve(rank_one_instance())
    a = tw.symbols[0]
    return _space_from_expr("rank1", tw.phi[0], a)


@lru_cache(maxsize=None)
def flat_space() -> WkbSpace:
    a = sp.Symbol("a1", real=True)
    sp_ = _space_from_expr("flat", a, a)
    return replace(sp_, phi=lambda x: np.asarray(x, dtype=float) * 1.0,
                   dphi=lambda x: np.ones_like(np.asarray(x, dtype=float)),
                   phi_inv=lambda y: np.asarray(y) * 1.0,
                   dphi_inv=lambda y: np.ones_like(np.asarray(y, dtype=float)))


def get_space(name: str) -> WkbSpace:
    spaces = {"rank1": rank_one_space, "flat": flat_space}
    if name not in spaces:
        raise ValueError(f"unknown space {name!r}; known: {sorted(spaces)}")
    return spaces[name]()


def phi_hbar(space: WkbSpace, a, hbar: float):
    if hbar == 0:
        raise ValueError("hbar must be nonzero")
    return (2.0 / hbar) * space.phi(np.asarray(a, dtype=float) * hbar / 2.0)


def wkb_phase(space: WkbSpace, x0, x1, x2) -> float:
    (a0, l0), (a1, l1), (a2, l2) = x0, x1, x2
    return float(space.xi_norm * (space.phi(a0 - a1) * l2 + space.phi(a1 - a2) * l0 + space.phi(a2 - a0) * l1))


def wkb_amplitude(space: WkbSpace, x1, x2) -> float:
    return float(abs(space.dphi(x1[0] - x2[0])))


# ---------------------------------------------------------------------------
# functions


A, L = sp.symbols("a l", real=True)
GAUSS = sp.exp(-A ** 2 - L ** 2)


@dataclass
class SampledFunction:
    expr: sp.Expr
    name: str = ""
    constant: complex | None = None
    decay_tol: float = 1e-12
    _f: Callable = field(default=None, repr=False)

    def __post_init__(self):
        self.expr = sp.sympify(self.expr)
        extra = self.expr.free_symbols - {A, L}
        if extra:
            raise ValueError(f"unknown symbols {sorted(map(str, extra))}; use a/q and l/p")
        if self.expr.free_symbols == set():
            self.constant = complex(self.expr)
        self._f = sp.lambdify((A, L), self.expr, "numpy")
        if not self.name:
            self.name = str(self.expr)

    @classmethod
    def parse(cls, text: str) -> "SampledFunction":
        loc = {"a": A, "l": L, "q": A, "p": L, "gauss": GAUSS, "exp": sp.exp, "I": sp.I}
        return cls(sp.sympify(text, locals=loc), name=text)

    @classmethod
    def gaussian(cls, a0=0.0, l0=0.0, width=1.0, poly=1) -> "SampledFunction":
        a0, l0, w = sp.nsimplify(a0), sp.nsimplify(l0), sp.nsimplify(width)
        return cls(sp.sympify(poly, locals={"a": A, "l": L}) * sp.exp(-((A - a0) ** 2 + (L - l0) ** 2) / w ** 2))

    def __call__(self, a, l):
        a = np.asarray(a, dtype=float)
        l = np.asarray(l, dtype=float)
        out = self._f(a, l)
        return np.broadcast_to(np.asarray(out, dtype=complex), np.broadcast(a, l).shape)

    def diff(self, var: str) -> sp.Expr:
        return sp.diff(self.expr, A if var == "a" else L)

    def value(self, x) -> complex:
        return complex(self.expr.subs({A: x[0], L: x[1]}).evalf())

    def check_decay(self, lbox: float, abox: float = None) -> float:
        """Largest |u| on the boundary of the l box (and a box if given)."""
        ts = np.linspace(-1, 1, 41)
        edge = [np.abs(self(ts * (abox or lbox), np.full_like(ts, s * lbox))).max() for s in (-1, 1)]
        if abox:
            edge += [np.abs(self(np.full_like(ts, s * abox), ts * lbox)).max() for s in (-1, 1)]
        return float(max(edge))


def poisson_bracket(u: SampledFunction, v: SampledFunction) -> sp.Expr:
    """{u, v} = du/da dv/dl - du/dl dv/da."""
    return sp.expand(u.diff("a") * v.diff("l") - u.diff("l") * v.diff("a"))


def poisson_bracket_fd(u: SampledFunction, v: SampledFunction, x, h: float = 1e-4) -> complex:
    def d(f, i):
        e = np.array([h, 0.0]) if i == 0 else np.array([0.0, h])
        x0 = np.asarray(x, dtype=float)
        return (f(*(x0 + e)) - f(*(x0 - e))) / (2 * h)

    return complex(d(u, 0) * d(v, 1) - d(u, 1) * d(v, 0))


# ---------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True)
class QuadratureConfig:
    hbar: float = 0.2
    nodes: int = 64
    lbox: float = 6.0       # l integration half-width (Fourier transforms)
    sbox: float = 11.0      # half-width in the rescaled Fourier variables
    abox: float = 6.0       # a half-width (Hilbert product)
    rule: str = "gauss-legendre"
    error_mode: str = "node-doubling"
    decay_tol: float = 1e-10

    def __post_init__(self):
        if self.nodes < 16:
            raise ValueError("at least 16 nodes per axis")

    def doubled(self) -> "QuadratureConfig":
        return replace(self, nodes=2 * self.nodes)


@lru_cache(maxsize=None)
def _gl(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def gl_nodes(n: int, half: float):
    x, w = _gl(n)
    return x * half, w * half


def fourier_points(u: SampledFunction, a, k, cfg: QuadratureConfig, chunk: int = 1 << 15) -> np.ndarray:
    """ũ(a, k) = ∫ exp(i k l) u(a, l) dl at arbitrary point arrays a, k (same shape)."""
    a = np.asarray(a, dtype=float)
    k = np.asarray(k, dtype=float)
    shape = np.broadcast(a, k).shape
    af = np.broadcast_to(a, shape).ravel()
    kf = np.broadcast_to(k, shape).ravel()
    ln, lw = gl_nodes(cfg.nodes, cfg.lbox)
    out = np.empty(af.size, dtype=complex)
    for s in range(0, af.size, chunk):
        aa = af[s:s + chunk, None]
        kk = kf[s:s + chunk, None]
        vals = u(aa, ln[None, :]) * np.exp(1j * kk * ln[None, :])
        out[s:s + chunk] = vals @ lw
    return out.reshape(shape)


def partial_fourier(u: SampledFunction, a_vals, alphas, cfg: QuadratureConfig) -> np.ndarray:
    """Table ũ(a_i, alpha_j) = ∫ exp(i alpha l) u(a, l) dl (pairing Omega(alpha, l) = alpha l)."""
    edge = u.check_decay(cfg.lbox)
    if edge > cfg.decay_tol:
        raise ValueError(f"function not decayed at l box edge: {edge:.3g}")
    a_vals = np.asarray(a_vals, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    ln, lw = gl_nodes(cfg.nodes, cfg.lbox)
    U = u(a_vals[:, None], ln[None, :]) * lw[None, :]
    E = np.exp(1j * np.outer(ln, alphas))
    return U @ E


@dataclass
class QuadResult:
    value: complex
    error: float
    coarse: complex
    roundoff: float

    def as_dict(self) -> dict:
        return {"value": [self.value.real, self.value.imag], "error": self.error}


def _with_doubling(fn, cfg: QuadratureConfig) -> QuadResult:
    coarse, _ = fn(cfg)
    fine, mag = fn(cfg.doubled())
    ro = 64 * EPS * mag
    return QuadResult(complex(fine), float(abs(fine - coarse) + ro), complex(coarse), float(ro))


# ---------------------------------------------------------------------------
# product


def _geometry(space: WkbSpace, a0: float, hbar: float, s1, s2):
    h = hbar / 2.0
    d1 = space.phi_inv(h * s1)
    d2 = space.phi_inv(h * s2)
    a1 = a0 - d1
    a2 = a0 + d2
    return a1, a2, space.dphi_inv(h * s1), space.dphi_inv(h * s2)


def _phase_l0(space: WkbSpace, a1, a2, l0: float, hbar: float):
    if l0 == 0:
        return 1.0
    return np.exp(2j * space.phi(a1 - a2) * l0 / hbar)


def _star_once(space, u, v, x0, hbar, cfg, fu=None, fv=None):
    a0, l0 = float(x0[0]), float(x0[1])
    sn, sw = gl_nodes(cfg.nodes, cfg.sbox)
    S1, S2 = np.meshgrid(sn, sn, indexing="ij")
    a1, a2, j1, j2 = _geometry(space, a0, hbar, S1, S2)
    Fu = (fu or (lambda a, k: fourier_points(u, a, k, cfg)))(a1, S2)
    Fv = (fv or (lambda a, k: fourier_points(v, a, k, cfg)))(a2, S1)
    integrand = j1 * j2 * space.dphi(a1 - a2) * _phase_l0(space, a1, a2, l0, hbar) * Fu * Fv
    W = np.outer(sw, sw)
    terms = W * integrand
    return terms.sum() / (4 * math.pi ** 2), float(np.abs(terms).sum() / (4 * math.pi ** 2))


def wkb_star(u: SampledFunction, v: SampledFunction, x0, hbar: float, cfg: QuadratureConfig,
             space: WkbSpace | None = None, tol: float | None = None) -> QuadResult:
    """u *_hbar v (x0) with a node-doubling error estimate."""
    space = space or rank_one_space()
    if hbar == 0:
        raise ValueError("hbar must be nonzero")
    for f in (u, v):
        if f.constant is not None:
            # 1 * w = w exactly by the normalization of the kernel
            other = v if f is u else u
            val = f.constant * (other.value(x0) if other.constant is None else other.constant)
            return QuadResult(val, 0.0, val, 0.0)
    for f in (u, v):
        edge = f.check_decay(cfg.lbox)
        if edge > cfg.decay_tol:
            raise ValueError(f"{f.name}: not decayed at l box edge ({edge:.3g})")
    res = _with_doubling(lambda c: _star_once(space, u, v, x0, hbar, c), cfg)
    if not np.isfinite(res.value):
        raise ValueError("non-finite quadrature value")
    if tol is not None and res.error > tol:
        raise ValueError(f"error estimate {res.error:.3g} exceeds tolerance {tol:.3g}")
    return res


def fourier_of_product(u: SampledFunction, v: SampledFunction, a0, k, hbar: float,
                       cfg: QuadratureConfig, space: WkbSpace | None = None) -> np.ndarray:
    """F_l[u * v](a0, k) as a one-dimensional integral (the delta in l0 removes one variable)."""
    space = space or rank_one_space()
    a0 = np.asarray(a0, dtype=float)
    k = np.asarray(k, dtype=float)
    shape = np.broadcast(a0, k).shape
    sn, sw = gl_nodes(cfg.nodes, cfg.sbox)
    h = hbar / 2.0
    A0 = np.broadcast_to(a0, shape)[..., None]
    K = np.broadcast_to(k, shape)[..., None]
    s1 = sn.reshape((1,) * len(shape) + (-1,))
    d1 = space.phi_inv(h * s1)
    dk = space.phi_inv(h * K)
    a1 = A0 - d1
    a2 = a1 + dk
    s2 = space.phi(dk - d1) / h
    Fu = fourier_points(u, *np.broadcast_arrays(a1, s2), cfg)
    Fv = fourier_points(v, *np.broadcast_arrays(a2, s1), cfg)
    return (space.dphi_inv(h * s1) * Fu * Fv) @ sw / (2 * math.pi)


class ProductFunction:
    """u * v represented through its partial Fourier transform."""

    def __init__(self, u, v, hbar, cfg, space):
        self.u, self.v, self.hbar, self.cfg, self.space = u, v, hbar, cfg, space

    def fourier(self, a, k) -> np.ndarray:
        return fourier_of_product(self.u, self.v, a, k, self.hbar, self.cfg, self.space)


def _triple_once(space, u, v, w, x0, hbar, cfg, left: bool):
    if left:
        uv = ProductFunction(u, v, hbar, cfg, space)
        return _star_once(space, None, w, x0, hbar, cfg, fu=uv.fourier)
    vw = ProductFunction(v, w, hbar, cfg, space)
    return _star_once(space, u, None, x0, hbar, cfg, fv=vw.fourier)


def associativity_defect(u, v, w, x0, hbar: float, cfg: QuadratureConfig, space: WkbSpace | None = None) -> dict:
    space = space or rank_one_space()
    left = _with_doubling(lambda c: _triple_once(space, u, v, w, x0, hbar, c, True), cfg)
    right = _with_doubling(lambda c: _triple_once(space, u, v, w, x0, hbar, c, False), cfg)
    defect = abs(left.value - right.value)
    err = left.error + right.error
    return {"left": left.value, "right": right.value, "defect": defect, "error": err,
            "pass": defect < 3 * err, "ratio": defect / err if err else math.inf}


def hilbert_product(u: SampledFunction, v: SampledFunction, hbar: float, cfg: QuadratureConfig,
                    space: WkbSpace | None = None) -> QuadResult:
    """<u|v> = ∫∫ ũ(a, α) conj(ṽ(a, α)) |Jac phi_hbar^{-1}(α)| da dα."""
    space = space or rank_one_space()

    def once(c):
        an, aw = gl_nodes(c.nodes, c.abox)
        sn, sw = gl_nodes(c.nodes, c.sbox)
        tu = partial_fourier(u, an, sn, c)
        tv = partial_fourier(v, an, sn, c)
        jac = np.abs(space.dphi_inv(hbar * sn / 2.0))
        terms = np.outer(aw, sw * jac) * tu * np.conj(tv)
        return terms.sum(), float(np.abs(terms).sum())

    return _with_doubling(once, cfg)


def l2_product(u: SampledFunction, v: SampledFunction, cfg: QuadratureConfig) -> complex:
    an, aw = gl_nodes(2 * cfg.nodes, cfg.abox)
    ln, lw = gl_nodes(2 * cfg.nodes, cfg.lbox)
    Aa, Ll = np.meshgrid(an, ln, indexing="ij")
    return complex((np.outer(aw, lw) * u(Aa, Ll) * np.conj(v(Aa, Ll))).sum())


# ---------------------------------------------------------------------------
# asymptotics


def first_order(u: SampledFunction, v: SampledFunction, x0, hbar: float) -> complex:
    """uv(x0) + (hbar / 2i) {u, v}(x0)."""
    sub = {A: x0[0], L: x0[1]}
    uv = complex((u.expr * v.expr).subs(sub).evalf())
    pb = complex(poisson_bracket(u, v).subs(sub).evalf())
    return uv + hbar / 2j * pb


def loglog_slope(hs, rs) -> tuple[float, float]:
    x = np.log(np.asarray(hs, dtype=float))
    y = np.log(np.asarray(rs, dtype=float))
    coef, res, *_ = np.polyfit(x, y, 1, full=True)
    resid = float(math.sqrt(res[0] / len(x))) if len(res) else 0.0
    return float(coef[0]), resid


def asymptotic_check(u, v, x0, hbars, cfg: QuadratureConfig, space: WkbSpace | None = None) -> dict:
    hbars = list(hbars)
    if len(hbars) < 5 or not all(0 < h <= 0.5 for h in hbars):
        raise ValueError("need at least 5 hbar values in (0, 0.5]")
    space = space or rank_one_space()
    rows = []
    for h in hbars:
        q = wkb_star(u, v, x0, h, cfg, space)
        r = q.value - first_order(u, v, x0, h)
        rows.append({"hbar": h, "value": q.value, "residual": abs(r), "error": q.error})
    rmin = min(r["residual"] for r in rows)
    emax = max(r["error"] for r in rows)
    report = {"rows": rows, "min_residual": rmin, "max_error": emax,
              "error_dominated": not (emax * 10 <= rmin)}
    if rmin == 0 or report["error_dominated"]:
        report["slope"] = None
        report["fit_residual"] = None
    else:
        report["slope"], report["fit_residual"] = loglog_slope(hbars, [r["residual"] for r in rows])
    return report


def richardson_coefficients(u, v, x0, cfg: QuadratureConfig, space: WkbSpace | None = None,
                            h: float = 0.1, levels: int = 3) -> dict:
    """hbar^0 and hbar^1 coefficients of hbar -> u *_hbar v (x0) by symmetric differences.

    The rescaled integral is smooth in hbar through 0, so P(±h) are evaluated
    directly and combined with Richardson extrapolation in h^2.
    """
    space = space or flat_space()
    even, odd = [], []
    for i in range(levels):
        hi = h / 2 ** i
        p_plus = _with_doubling(lambda c: _star_once(space, u, v, x0, hi, c), cfg).value
        p_minus = _with_doubling(lambda c: _star_once(space, u, v, x0, -hi, c), cfg).value
        even.append((p_plus + p_minus) / 2)
        odd.append((p_plus - p_minus) / (2 * hi))

    def extrapolate(vals):
        table = list(vals)
        for m in range(1, len(table)):
            f = 4 ** m
            table = [(f * table[i + 1] - table[i]) / (f - 1) for i in range(len(table) - 1)]
        return table[0]

    return {"c0": complex(extrapolate(even)), "c1": complex(extrapolate(odd))}


def formal_coefficients(u: SampledFunction, v: SampledFunction, x0, lam=sp.Rational(1, 2)) -> dict:
    """hbar^0, hbar^1 coefficients of the lambda-ordered formal product with t = hbar / i.

    Uses the bidifferential form on the chart coordinates (q, p) = (a, l).
    """
    from .phase_space import bidifferential_term

    sub = {A: x0[0], L: x0[1]}
    c0 = complex(bidifferential_term(0, lam, u.expr, v.expr, [A], [L]).subs(sub).evalf())
    c1t = complex(bidifferential_term(1, lam, u.expr, v.expr, [A], [L]).subs(sub).evalf())
    return {"c0": c0, "c1": c1t / 1j}

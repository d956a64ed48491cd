"""Exact multivariate polynomials over Q and finite sums of pure tensors.

The deformation parameter ``t`` is an ordinary variable whose degree may be
capped (``tcap``); terms above the cap are dropped after every operation,
which models truncation of formal power series in ``t``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Iterable, Mapping, Sequence

T = "t"

# A monomial is a tuple of (name, exponent) pairs sorted by variable key,
# exponents strictly positive.
Mono = tuple

_NAT = re.compile(r"(\d+)")


def var_key(name: str) -> tuple:
    """Variable order used for canonical output: q*, p*, others, then t."""
    if name == T or re.fullmatch(r"t_?\d+", name):
        group = 3
    elif name.startswith("q"):
        group = 0
    elif name.startswith("p"):
        group = 1
    else:
        group = 2
    parts = tuple(int(s) if s.isdigit() else s for s in _NAT.split(name) if s)
    return (group,) + tuple((0, p) if isinstance(p, int) else (1, p) for p in parts)


def mono(*pairs) -> Mono:
    acc: dict[str, int] = {}
    for name, e in pairs:
        if e:
            acc[name] = acc.get(name, 0) + e
    return tuple(sorted(((n, e) for n, e in acc.items() if e), key=lambda x: var_key(x[0])))


def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    return mono(*a, *b)


def mono_deg(m: Mono, names: Iterable[str] | None = None) -> int:
    if names is None:
        return sum(e for _, e in m)
    names = set(names)
    return sum(e for n, e in m if n in names)


def tdeg(m: Mono) -> int:
    for n, e in m:
        if n == T:
            return e
    return 0


def mono_sort_key(m: Mono) -> tuple:
    # lex-descending on the canonical variable order
    return tuple((var_key(n), -e) for n, e in m) + ((( 9,), 0),)


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


def _min_cap(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class Poly:
    """Polynomial with rational coefficients over named commuting variables."""

    __slots__ = ("terms", "tcap", "_hash")

    def __init__(self, terms: Mapping[Mono, object] | None = None, tcap: int | None = None):
        clean: dict[Mono, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = _coerce(c)
                if c and (tcap is None or tdeg(m) <= tcap):
                    clean[m] = clean.get(m, 0) + c
        self.terms = {m: c for m, c in clean.items() if c}
        self.tcap = tcap
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c, tcap: int | None = None) -> "Poly":
        return cls({(): c}, tcap)

    @classmethod
    def var(cls, name: str, power: int = 1, tcap: int | None = None) -> "Poly":
        return cls({mono((name, power)): 1}, tcap)

    @classmethod
    def from_mono(cls, m: Mono, c=1, tcap: int | None = None) -> "Poly":
        return cls({m: c}, tcap)

    @classmethod
    def parse(cls, text: str, tcap: int | None = None) -> "Poly":
        return _Parser(text).parse().truncate(tcap)

    # -- basic queries ----------------------------------------------------
    @property
    def variables(self) -> tuple[str, ...]:
        names = {n for m in self.terms for n, _ in m}
        return tuple(sorted(names, key=var_key))

    def exponent_vector(self, m: Mono, variables: Sequence[str] | None = None) -> tuple[int, ...]:
        variables = self.variables if variables is None else variables
        d = dict(m)
        return tuple(d.get(v, 0) for v in variables)

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(not m for m in self.terms)

    def const_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def degree(self, names: Iterable[str] | None = None) -> int:
        if not self.terms:
            return -1
        return max(mono_deg(m, names) for m in self.terms)

    def items(self):
        return self.terms.items()

    def monomials(self) -> list[Mono]:
        return sorted(self.terms, key=mono_sort_key)

    def truncate(self, tcap: int | None) -> "Poly":
        cap = _min_cap(self.tcap, tcap)
        if cap == self.tcap:
            return self
        return Poly(self.terms, cap)

    # -- arithmetic -------------------------------------------------------
    def _wrap(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(other)

    def __add__(self, other) -> "Poly":
        other = self._wrap(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out, _min_cap(self.tcap, other.tcap))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()}, self.tcap)

    def __sub__(self, other) -> "Poly":
        return self + (-self._wrap(other))

    def __rsub__(self, other) -> "Poly":
        return self._wrap(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = _coerce(other)
            return Poly({m: c * v for m, v in self.terms.items()}, self.tcap)
        cap = _min_cap(self.tcap, other.tcap)
        out: dict[Mono, Fraction] = {}
        for m1, c1 in self.terms.items():
            d1 = tdeg(m1)
            for m2, c2 in other.terms.items():
                if cap is not None and d1 + tdeg(m2) > cap:
                    continue
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out, cap)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out = Poly.const(1, self.tcap)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "Poly":
        return self * _coerce(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- calculus and substitution -----------------------------------------
    def diff(self, var: str, order: int = 1) -> "Poly":
        return poly_diff(self, var, order)

    def substitute(self, mapping: Mapping[str, "Poly"]) -> "Poly":
        return poly_substitute(self, mapping)

    def rename(self, mapping: Mapping[str, str]) -> "Poly":
        out: dict[Mono, Fraction] = {}
        for m, c in self.terms.items():
            nm = mono(*((mapping.get(n, n), e) for n, e in m))
            out[nm] = out.get(nm, 0) + c
        return Poly(out, self.tcap)

    def coeff_t(self, k: int) -> "Poly":
        """Coefficient of t^k (a t-free polynomial)."""
        out = {}
        for m, c in self.terms.items():
            if tdeg(m) == k:
                out[tuple(x for x in m if x[0] != T)] = c
        return Poly(out)

    def collect(self, names: Iterable[str]) -> dict[Mono, "Poly"]:
        """Split as sum of (monomial in `names`) * (poly in the remaining variables)."""
        names = set(names)
        out: dict[Mono, dict] = {}
        for m, c in self.terms.items():
            inside = tuple(x for x in m if x[0] in names)
            rest = tuple(x for x in m if x[0] not in names)
            out.setdefault(inside, {})[rest] = c
        return {k: Poly(v, self.tcap) for k, v in out.items()}

    def evaluate(self, values: Mapping[str, object]):
        """Numeric evaluation; all variables must be bound."""
        total = 0
        for m, c in self.terms.items():
            term = c
            for n, e in m:
                term = term * values[n] ** e
            total = total + term
        return total

    # -- printing ---------------------------------------------------------
    def __str__(self) -> str:
        return poly_format(self)

    def __repr__(self) -> str:
        return f"Poly({poly_format(self)!r})"


def poly_arith(a: Poly, b, kind: str) -> Poly:
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "scale":
        return a.scale(b)
    raise ValueError(f"unknown kind {kind!r}")


def poly_diff(u: Poly, var: str, order: int = 1) -> Poly:
    if order < 0:
        raise ValueError("negative order")
    if not _is_symbol(var):
        raise KeyError(f"unknown variable {var!r}")
    out: dict[Mono, Fraction] = {}
    for m, c in u.terms.items():
        d = dict(m)
        e = d.get(var, 0)
        if e < order:
            continue
        coef = c
        for k in range(order):
            coef *= e - k
        d[var] = e - order
        nm = mono(*d.items())
        out[nm] = out.get(nm, 0) + coef
    return Poly(out, u.tcap)


def _is_symbol(name: str) -> bool:
    return bool(re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name))


def poly_substitute(u: Poly, mapping: Mapping[str, Poly]) -> Poly:
    """Simultaneous substitution of variables by polynomials."""
    caps = [u.tcap] + [p.tcap for p in mapping.values()]
    cap = None
    for c in caps:
        cap = _min_cap(cap, c)
    powers: dict[tuple[str, int], Poly] = {}

    def power(name: str, e: int) -> Poly:
        key = (name, e)
        if key not in powers:
            base = mapping[name].truncate(cap)
            powers[key] = base if e == 1 else power(name, e - 1) * base
        return powers[key]

    out = Poly({}, cap)
    for m, c in u.terms.items():
        keep = tuple(x for x in m if x[0] not in mapping)
        term = Poly({keep: c}, cap)
        for n, e in m:
            if n in mapping:
                term = term * power(n, e)
        out = out + term
    return out


def poly_format(u: Poly) -> str:
    if not u.terms:
        return "0"
    parts = []
    for m in u.monomials():
        c = u.terms[m]
        factors = [n if e == 1 else f"{n}^{e}" for n, e in m]
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not factors:
            body = str(a)
        elif a == 1:
            body = "*".join(factors)
        else:
            body = str(a) + "*" + "*".join(factors)
        parts.append((sign, body))
    first_sign, first = parts[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


class _Parser:
    _tok = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")

    def __init__(self, text: str):
        self.toks = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = self._tok.match(text, pos)
            if not m:
                break
            if m.group(1):
                self.toks.append(("num", int(m.group(1))))
            elif m.group(2):
                self.toks.append(("var", m.group(2)))
            else:
                self.toks.append(("op", m.group(3)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if not self.toks:
            raise ValueError("empty polynomial expression")
        p = self.expr()
        if self.i != len(self.toks):
            raise ValueError(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> Poly:
        sign = 1
        if self.peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        p = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.power()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            q = self.power()
            if op == "*":
                p = p * q
            else:
                if not q.is_const() or q.is_zero():
                    raise ValueError("division only by nonzero constants")
                p = p * (1 / q.const_term())
        return p

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ValueError("exponent must be a nonnegative integer")
            base = base ** val
        return base

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            return Poly.const(val)
        if kind == "var":
            return Poly.var(val)
        if (kind, val) == ("op", "("):
            p = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return p
        if (kind, val) == ("op", "-"):
            return -self.atom()
        raise ValueError(f"unexpected token {val!r}")


def monomials_upto(names: Sequence[str], maxdeg: int, mindeg: int = 0) -> list[Mono]:
    """All monomials in `names` with mindeg <= total degree <= maxdeg."""
    out = []
    n = len(names)
    for exps in iproduct(range(maxdeg + 1), repeat=n):
        d = sum(exps)
        if mindeg <= d <= maxdeg:
            out.append(mono(*zip(names, exps)))
    return sorted(out, key=lambda m: (mono_deg(m), mono_sort_key(m)))


# ---------------------------------------------------------------------------
# Tensor elements


def _split_t(m: Mono) -> tuple[Mono, int]:
    k = 0
    rest = []
    for n, e in m:
        if n == T:
            k = e
        else:
            rest.append((n, e))
    return tuple(rest), k


def _with_t(m: Mono, k: int) -> Mono:
    if not k:
        return m
    return mono_mul(m, ((T, k),))


class TensorElement:
    """Finite sum of pure tensors of monomials with rational coefficients.

    `scalar_leg` set means the tensor is over Q[[t]]: all powers of t are
    moved to that leg. With `scalar_leg=None` each leg keeps its own t.
    `tcap` bounds the total t-degree of a term across all legs.
    """

    __slots__ = ("terms", "carriers", "scalar_leg", "tcap")

    def __init__(self, terms: Mapping[tuple, object] | Iterable = (), carriers: Sequence[str] = ("L", "R"),
                 scalar_leg: int | None = 0, tcap: int | None = None):
        self.carriers = tuple(carriers)
        self.scalar_leg = scalar_leg
        self.tcap = tcap
        rank = len(self.carriers)
        acc: dict[tuple, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            c = _coerce(c)
            if not c:
                continue
            if len(key) != rank:
                raise ValueError("tensor key rank does not match carriers")
            if scalar_leg is not None:
                total = 0
                legs = []
                for m in key:
                    r, k = _split_t(m)
                    legs.append(r)
                    total += k
                if tcap is not None and total > tcap:
                    continue
                legs[scalar_leg] = _with_t(legs[scalar_leg], total)
                key = tuple(legs)
            elif tcap is not None and sum(tdeg(m) for m in key) > tcap:
                continue
            acc[key] = acc.get(key, 0) + c
        nonzero = [(k, v) for k, v in acc.items() if v]
        nonzero.sort(key=lambda kv: tuple(mono_sort_key(m) for m in reversed(kv[0])))
        self.terms = dict(nonzero)

    @property
    def rank(self) -> int:
        return len(self.carriers)

    def like(self, terms, carriers=None, scalar_leg="same") -> "TensorElement":
        return TensorElement(terms, self.carriers if carriers is None else carriers,
                             self.scalar_leg if scalar_leg == "same" else scalar_leg, self.tcap)

    @classmethod
    def pure(cls, *polys: Poly, carriers: Sequence[str] | None = None, scalar_leg: int | None = 0,
             tcap: int | None = None) -> "TensorElement":
        carriers = tuple(carriers) if carriers else tuple(f"A{i}" for i in range(len(polys)))
        terms: dict[tuple, Fraction] = {}
        for combo in iproduct(*(p.terms.items() for p in polys)):
            key = tuple(m for m, _ in combo)
            c = Fraction(1)
            for _, v in combo:
                c *= v
            terms[key] = terms.get(key, 0) + c
        return cls(terms, carriers, scalar_leg, tcap)

    @classmethod
    def zero(cls, carriers: Sequence[str], scalar_leg: int | None = 0, tcap: int | None = None):
        return cls({}, carriers, scalar_leg, tcap)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return self.terms.items()

    def _check(self, other: "TensorElement"):
        if self.carriers != other.carriers:
            raise ValueError(f"carrier mismatch: {self.carriers} vs {other.carriers}")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return TensorElement(out, self.carriers, self.scalar_leg, _min_cap(self.tcap, other.tcap))

    def __neg__(self) -> "TensorElement":
        return self.like({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        c = _coerce(c)
        return self.like({k: c * v for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.carriers == other.carriers and self.terms == other.terms

    def __hash__(self):
        return hash((self.carriers, frozenset(self.terms.items())))

    def leg_polys(self, key: tuple) -> tuple[Poly, ...]:
        return tuple(Poly.from_mono(m) for m in key)

    def normalize(self) -> "TensorElement":
        return tensor_normalize(self)

    def permute(self, perm: Sequence[int]) -> "TensorElement":
        """New leg i is old leg perm[i]."""
        carriers = tuple(self.carriers[j] for j in perm)
        return TensorElement({tuple(k[j] for j in perm): c for k, c in self.terms.items()}, carriers,
                             self.scalar_leg if self.scalar_leg is None else 0, self.tcap)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for k, c in self.terms.items():
            legs = " ⊗ ".join(poly_format(Poly.from_mono(m)) for m in k)
            out.append(f"{c}*({legs})" if c != 1 else f"({legs})")
        return " + ".join(out)

    __repr__ = __str__


def tensor_normalize(e: TensorElement) -> TensorElement:
    return TensorElement(e.terms, e.carriers, e.scalar_leg, e.tcap)


def tensor_outer(parts: Sequence[TensorElement], scalar_leg: int | None = 0, tcap: int | None = None) -> TensorElement:
    carriers = tuple(c for p in parts for c in p.carriers)
    terms: dict[tuple, Fraction] = {}
    for combo in iproduct(*(p.terms.items() for p in parts)):
        key = tuple(m for k, _ in combo for m in k)
        c = Fraction(1)
        for _, v in combo:
            c *= v
        terms[key] = terms.get(key, 0) + c
    return TensorElement(terms, carriers, scalar_leg, tcap)


def apply_block(x: TensorElement, start: int, width: int,
                fn: Callable[[TensorElement], "TensorElement | Poly"],
                carriers: Sequence[str] | None = None, inner_scalar_leg: int | None = 0) -> TensorElement:
    """Replace legs [start, start+width) of every term by fn(pure block).

    fn receives a single-term TensorElement (coefficient 1) and returns a
    TensorElement of any rank, or a Poly in t alone for rank 0 (a scalar).
    """
    cache: dict[tuple, object] = {}
    out: dict[tuple, Fraction] = {}
    new_carriers = None
    for key, c in x.terms.items():
        block = key[start:start + width]
        if x.scalar_leg is not None and start <= x.scalar_leg < start + width:
            # t is a scalar: strip it from the block, reinsert afterwards
            stripped = list(block)
            stripped[x.scalar_leg - start], k = _split_t(block[x.scalar_leg - start])
            block = tuple(stripped)
            extra_t = k
        else:
            extra_t = 0
        if block not in cache:
            sub = TensorElement({block: 1}, x.carriers[start:start + width], inner_scalar_leg, x.tcap)
            cache[block] = fn(sub)
        res = cache[block]
        before, after = key[:start], key[start + width:]
        if isinstance(res, Poly):
            for m, v in res.terms.items():
                _, k = _split_t(m)
                nk = list(before + after)
                if nk:
                    tgt = 0 if x.scalar_leg is None else min(x.scalar_leg, len(nk) - 1)
                    nk[tgt] = _with_t(nk[tgt], k + extra_t)
                elif k + extra_t:
                    raise ValueError("cannot place t in a rank-0 tensor")
                nk = tuple(nk)
                out[nk] = out.get(nk, 0) + c * v
            new_carriers = x.carriers[:start] + x.carriers[start + width:]
        else:
            sub_carriers = res.carriers
            new_carriers = x.carriers[:start] + sub_carriers + x.carriers[start + width:]
            for sk, v in res.terms.items():
                nk = list(before + sk + after)
                if extra_t:
                    tgt = x.scalar_leg if x.scalar_leg is not None else start
                    tgt = min(tgt, len(nk) - 1)
                    nk[tgt] = _with_t(nk[tgt], extra_t)
                nk = tuple(nk)
                out[nk] = out.get(nk, 0) + c * v
    if new_carriers is None:
        if carriers is None:
            raise ValueError("carriers required when mapping a zero tensor")
        new_carriers = tuple(carriers)
    if carriers is not None:
        new_carriers = tuple(carriers)
    sl = x.scalar_leg
    if sl is not None:
        sl = min(sl, len(new_carriers) - 1) if new_carriers else None
    return TensorElement(out, new_carriers, sl, x.tcap)


def block_mul(x: TensorElement, y: TensorElement, width: int,
              mul: Callable[[TensorElement, TensorElement], TensorElement]) -> TensorElement:
    """Blockwise product in A^{⊗k} where A-elements occupy `width` legs."""
    if x.carriers != y.carriers:
        raise ValueError("carrier mismatch")
    nblocks = x.rank // width
    cache: dict[tuple, TensorElement] = {}
    out: dict[tuple, Fraction] = {}
    for kx, cx in x.terms.items():
        for ky, cy in y.terms.items():
            parts = []
            for b in range(nblocks):
                bx = kx[b * width:(b + 1) * width]
                by = ky[b * width:(b + 1) * width]
                if (bx, by) not in cache:
                    ex = TensorElement({bx: 1}, x.carriers[b * width:(b + 1) * width], 0, x.tcap)
                    ey = TensorElement({by: 1}, x.carriers[b * width:(b + 1) * width], 0, x.tcap)
                    cache[(bx, by)] = mul(ex, ey)
                parts.append(cache[(bx, by)])
            prod = tensor_outer(parts, scalar_leg=None, tcap=x.tcap)
            for k, v in prod.terms.items():
                out[k] = out.get(k, 0) + cx * cy * v
    return TensorElement(out, x.carriers, x.scalar_leg, _min_cap(x.tcap, y.tcap))


def contract_blocks(x: TensorElement, width: int,
                    mul: Callable[[TensorElement, TensorElement], TensorElement]) -> TensorElement:
    """m: A⊗A -> A applied to a rank-2*width tensor."""
    out = None
    for k, c in x.terms.items():
        a = TensorElement({k[:width]: 1}, x.carriers[:width], 0, x.tcap)
        b = TensorElement({k[width:]: 1}, x.carriers[width:], 0, x.tcap)
        r = mul(a, b).scale(c)
        out = r if out is None else out + r
    if out is None:
        return TensorElement({}, x.carriers[:width], 0, x.tcap)
    return out


def poly_to_tensor(u: Poly, leg_of: Callable[[str], tuple[int, str]], carriers: Sequence[str],
                   scalar_leg: int | None = None, tcap: int | None = None) -> TensorElement:
    """Split each monomial of u into legs according to leg_of(name) -> (leg, new_name)."""
    rank = len(carriers)
    terms: dict[tuple, Fraction] = {}
    for m, c in u.terms.items():
        legs: list[list] = [[] for _ in range(rank)]
        for n, e in m:
            i, nn = leg_of(n)
            legs[i].append((nn, e))
        key = tuple(mono(*l) for l in legs)
        terms[key] = terms.get(key, 0) + c
    return TensorElement(terms, carriers, scalar_leg, tcap)


def tensor_to_poly(x: TensorElement) -> Poly:
    """Multiply the legs together (valid when legs use disjoint variables)."""
    out: dict[Mono, Fraction] = {}
    for k, c in x.terms.items():
        m = ()
        for leg in k:
            m = mono_mul(m, leg)
        out[m] = out.get(m, 0) + c
    return Poly(out, x.tcap)

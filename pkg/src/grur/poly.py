"""Sparse multivariate polynomials with exact coefficients.

A :class:`MultiPoly` is a map from exponent tuples to nonzero coefficients
over an explicit, ordered variable list.  Coefficients live in a *domain*:
``QQ`` (``fractions.Fraction``) or a rational function field built by
:mod:`grur.ratfunc`.  Values are treated as immutable once built.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as igcd, isqrt
from typing import Iterable, Sequence

from .errors import StructureError

Rational = Fraction
Monomial = tuple  # exponent vector, one slot per ring variable


class RationalField:
    """The coefficient field Q, carried by ``Fraction``."""

    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def convert(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise TypeError(f"cannot convert {x!r} to a rational")

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


# ---------------------------------------------------------------- orders

def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


@dataclass(frozen=True)
class MonomialOrder:
    """grevlex, or a two-block elimination order.

    For ``kind == "block"`` the first block dominates: monomials are compared
    by grevlex on the first block, ties broken by grevlex on the second.
    The X-over-W elimination order is ``block_order(x_idx, w_idx, n)``.
    """

    nvars: int
    kind: str = "grevlex"
    blocks: tuple = ()

    def key(self, e):
        if self.kind == "grevlex":
            return _grevlex_key(e)
        return tuple(_grevlex_key(tuple(e[i] for i in blk)) for blk in self.blocks)


def grevlex(nvars: int) -> MonomialOrder:
    return MonomialOrder(nvars)


def block_order(first: Sequence[int], second: Sequence[int], nvars: int) -> MonomialOrder:
    first, second = tuple(first), tuple(second)
    if sorted(first + second) != list(range(nvars)):
        raise StructureError("blocks must partition the variables")
    return MonomialOrder(nvars, "block", (first, second))


def compare_monomials(a: Monomial, b: Monomial, order: MonomialOrder) -> str:
    """``"less"``, ``"equal"`` or ``"greater"`` as ``a`` is below, equal to, or above ``b``."""
    if len(a) != len(b) or len(a) != order.nvars:
        raise StructureError(f"arity mismatch: {a}, {b} for {order.nvars} variables")
    ka, kb = order.key(a), order.key(b)
    return "greater" if ka > kb else ("less" if ka < kb else "equal")


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a, b):
    """``a / b`` if ``b`` divides ``a``, else None."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def mono_divides(b, a):
    return all(y <= x for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


# ----------------------------------------------------------- polynomials

class MultiPoly:
    __slots__ = ("vars", "terms", "domain")

    def __init__(self, vars: Iterable[str], terms=None, domain=QQ, *, _clean=False):
        self.vars = tuple(vars)
        self.domain = domain
        if _clean:
            self.terms = terms
            return
        n = len(self.vars)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise StructureError(f"exponent {e} does not match {self.vars}")
            if any(x < 0 for x in e):
                raise StructureError(f"negative exponent {e}")
            c = domain.convert(c)
            if c:
                clean[e] = clean.get(e, domain.zero) + c if e in clean else c
        self.terms = {e: c for e, c in clean.items() if c}

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, vars, domain=QQ):
        return cls(vars, {}, domain, _clean=True)

    @classmethod
    def constant(cls, c, vars, domain=QQ):
        vars = tuple(vars)
        c = domain.convert(c)
        return cls(vars, {(0,) * len(vars): c} if c else {}, domain, _clean=True)

    @classmethod
    def var(cls, name, vars, domain=QQ):
        vars = tuple(vars)
        if name not in vars:
            raise StructureError(f"unknown variable {name!r}")
        e = tuple(1 if v == name else 0 for v in vars)
        return cls(vars, {e: domain.one}, domain, _clean=True)

    @classmethod
    def monomial(cls, e, c, vars, domain=QQ):
        return cls(vars, {tuple(e): c}, domain)

    # basic queries ------------------------------------------------------
    @property
    def nvars(self):
        return len(self.vars)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self):
        return self.terms.get((0,) * len(self.vars), self.domain.zero)

    def _index(self, var):
        if isinstance(var, int):
            return var
        try:
            return self.vars.index(var)
        except ValueError:
            raise StructureError(f"unknown variable {var!r}") from None

    def degree(self, var=None) -> int:
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self._index(var)
        return max(e[i] for e in self.terms)

    def used_vars(self):
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    def sorted_terms(self, order: MonomialOrder | None = None, reverse=True):
        key = order.key if order is not None else _grevlex_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=reverse)

    def leading_term(self, order: MonomialOrder | None = None):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = order.key if order is not None else _grevlex_key
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def lm(self, order=None):
        return self.leading_term(order)[0]

    def lc(self, order=None):
        return self.leading_term(order)[1]

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise StructureError(f"ring mismatch: {self.vars} vs {other.vars}")
            if other.domain != self.domain:
                raise StructureError(f"domain mismatch: {self.domain} vs {other.domain}")
            return other
        return MultiPoly.constant(other, self.vars, self.domain)

    def __add__(self, other):
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for e, c in small.items():
            if e in out:
                s = out[e] + c
                if s:
                    out[e] = s
                else:
                    del out[e]
            else:
                out[e] = c
        return MultiPoly(self.vars, out, self.domain, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()}, self.domain, _clean=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = self.domain.convert(other)
            if not c:
                return MultiPoly.zero(self.vars, self.domain)
            return MultiPoly(self.vars, {e: v * c for e, v in self.terms.items()}, self.domain, _clean=True)
        other = self._coerce(other)
        if self.domain is QQ and len(self.terms) * len(other.terms) > 4:
            return _mul_qq(self, other)
        out = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                if e in out:
                    out[e] = out[e] + ca * cb
                else:
                    out[e] = ca * cb
        return MultiPoly(self.vars, {e: c for e, c in out.items() if c}, self.domain, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(1, self.vars, self.domain)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c):
        return self * c

    def mul_term(self, e, c):
        if not c:
            return MultiPoly.zero(self.vars, self.domain)
        return MultiPoly(
            self.vars,
            {tuple(x + y for x, y in zip(k, e)): v * c for k, v in self.terms.items()},
            self.domain,
            _clean=True,
        )

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        try:
            return self.terms == MultiPoly.constant(other, self.vars, self.domain).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # substitution -------------------------------------------------------
    def evaluate_partial(self, assignment: dict) -> "MultiPoly":
        """Substitute ``{name: value}``; the ring shrinks to the remaining variables."""
        idx = {}
        for name, val in assignment.items():
            if name not in self.vars:
                raise StructureError(f"unknown variable {name!r}")
            idx[self.vars.index(name)] = self.domain.convert(val)
        keep = [i for i in range(len(self.vars)) if i not in idx]
        out = {}
        cache: dict = {}
        for e, c in self.terms.items():
            for i, v in idx.items():
                if e[i]:
                    key = (i, e[i])
                    p = cache.get(key)
                    if p is None:
                        p = cache[key] = v ** e[i]
                    c = c * p
            if not c:
                continue
            k = tuple(e[i] for i in keep)
            out[k] = out[k] + c if k in out else c
        return MultiPoly(tuple(self.vars[i] for i in keep), {e: c for e, c in out.items() if c},
                         self.domain, _clean=True)

    def evaluate(self, point):
        """Full evaluation; ``point`` is a mapping or a sequence aligned with ``vars``."""
        if not isinstance(point, dict):
            point = dict(zip(self.vars, point))
        return self.evaluate_partial(point).constant_value()

    def derivative(self, var) -> "MultiPoly":
        i = self._index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                k = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[k] = c * e[i]
        return MultiPoly(self.vars, out, self.domain, _clean=True)

    def coeffs_in(self, var) -> dict:
        """Coefficients with respect to ``var`` as polynomials in the other variables."""
        i = self._index(var)
        rest = self.vars[:i] + self.vars[i + 1:]
        buckets: dict = {}
        for e, c in self.terms.items():
            buckets.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {d: MultiPoly(rest, t, self.domain, _clean=True) for d, t in buckets.items()}

    @classmethod
    def from_coeffs_in(cls, var, coeffs: dict, vars, domain=QQ):
        """Inverse of :meth:`coeffs_in`: ``sum coeffs[d] * var^d``."""
        vars = tuple(vars)
        i = vars.index(var)
        out = {}
        for d, p in coeffs.items():
            for e, c in p.terms.items():
                out[e[:i] + (d,) + e[i:]] = c
        return cls(vars, out, domain, _clean=True)

    def change_ring(self, vars) -> "MultiPoly":
        """Re-express over ``vars``, which must contain every variable in use."""
        vars = tuple(vars)
        pos = []
        for i, v in enumerate(self.vars):
            if v in vars:
                pos.append((i, vars.index(v)))
            elif any(e[i] for e in self.terms):
                raise StructureError(f"variable {v!r} in use but absent from {vars}")
        out = {}
        for e, c in self.terms.items():
            k = [0] * len(vars)
            for i, j in pos:
                k[j] = e[i]
            out[tuple(k)] = c
        return MultiPoly(vars, out, self.domain, _clean=True)

    def map_coeffs(self, f, domain=None) -> "MultiPoly":
        domain = domain or self.domain
        out = {}
        for e, c in self.terms.items():
            v = f(c)
            if v:
                out[e] = v
        return MultiPoly(self.vars, out, domain, _clean=True)

    # univariate view ------------------------------------------------------
    def to_dense(self, var=None) -> list:
        """Coefficient list ``[c0, c1, ...]`` of a univariate polynomial."""
        if var is None:
            if len(self.vars) != 1:
                raise StructureError(f"not univariate: {self.vars}")
            var = 0
        i = self._index(var)
        if any(any(x for j, x in enumerate(e) if j != i) for e in self.terms):
            raise StructureError(f"not univariate in {self.vars[i]}")
        d = self.degree(i)
        out = [self.domain.zero] * (d + 1)
        for e, c in self.terms.items():
            out[e[i]] = c
        return out

    @classmethod
    def from_dense(cls, coeffs, var: str = "U0", domain=QQ, vars=None):
        vars = tuple(vars) if vars is not None else (var,)
        i = vars.index(var)
        n = len(vars)
        out = {}
        for d, c in enumerate(coeffs):
            c = domain.convert(c)
            if c:
                e = [0] * n
                e[i] = d
                out[tuple(e)] = c
        return cls(vars, out, domain, _clean=True)

    # Q-specific helpers ---------------------------------------------------
    def content(self) -> Fraction:
        """Positive rational c with ``self / c`` integral and primitive."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = igcd(num, c.numerator)
            den = den * c.denominator // igcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "MultiPoly":
        """Integral primitive associate with positive leading coefficient (grevlex)."""
        if not self.terms:
            return self
        c = self.content()
        if self.lc() < 0:
            c = -c
        return self * (1 / c)

    def monic(self, order=None) -> "MultiPoly":
        if not self.terms:
            return self
        lc = self.lc(order)
        if lc == self.domain.one:
            return self
        inv = self.domain.one / lc
        return MultiPoly(self.vars, {e: c * inv for e, c in self.terms.items()}, self.domain, _clean=True)

    # display --------------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r}, vars={self.vars})"


def format_monomial(e, vars) -> str:
    parts = []
    for v, k in zip(vars, e):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def _format_coeff(c):
    if isinstance(c, Fraction):
        return str(c), c < 0
    s = str(c)
    return s, False


def format_poly(p: MultiPoly, order: MonomialOrder | None = None) -> str:
    if not p.terms:
        return "0"
    out = []
    for e, c in p.sorted_terms(order):
        mono = format_monomial(e, p.vars)
        if not isinstance(c, Fraction) and c.is_constant():
            c = c.constant_value()
        if isinstance(c, Fraction):
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
        else:
            # a single-term polynomial coefficient reads fine without brackets
            neg = c.is_polynomial() and len(c.num.terms) == 1 and next(iter(c.num.terms.values())) < 0
            cs = str(-c if neg else c)
            simple = c.is_polynomial() and len(c.num.terms) == 1
            if mono:
                body = f"{cs}*{mono}" if simple else f"({cs})*{mono}"
            else:
                body = cs if simple or len(p.terms) == 1 else f"({cs})"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out)


# ------------------------------------------------------ multivariate over Q

def _check_same(a: MultiPoly, b: MultiPoly):
    if a.vars != b.vars:
        raise StructureError(f"ring mismatch: {a.vars} vs {b.vars}")


def poly_divmod(a: MultiPoly, b: MultiPoly, order: MonomialOrder | None = None):
    """Division of ``a`` by a single polynomial ``b``: ``a = q*b + r``."""
    _check_same(a, b)
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    key = order.key if order is not None else _grevlex_key
    lb, cb = b.leading_term(order)
    inv = b.domain.one / cb
    rest_b = [(e, c) for e, c in b.terms.items() if e != lb]
    rem = dict(a.terms)
    quo = {}
    out_r = {}
    while rem:
        e = max(rem, key=key)
        c = rem.pop(e)
        m = mono_div(e, lb)
        if m is None:
            out_r[e] = c
            continue
        f = c * inv
        quo[m] = quo.get(m, b.domain.zero) + f
        for eb, cbb in rest_b:
            k = tuple(x + y for x, y in zip(m, eb))
            v = rem.get(k, b.domain.zero) - f * cbb
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return (MultiPoly(a.vars, {e: c for e, c in quo.items() if c}, a.domain, _clean=True),
            MultiPoly(a.vars, out_r, a.domain, _clean=True))


def divexact(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    q, r = poly_divmod(a, b)
    if not r.is_zero():
        raise ArithmeticError(f"{b} does not divide {a}")
    return q


def _univ_gcd_dense_int(a: list, b: list) -> list:
    """Primitive PRS gcd of integer coefficient lists (low degree first)."""
    def prim(p):
        g = 0
        for c in p:
            g = igcd(g, c)
        return [c // g for c in p] if g > 1 else p

    def trim(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    a, b = trim(prim(list(a))), trim(prim(list(b)))
    if len(a) < len(b):
        a, b = b, a
    while b:
        # pseudo-remainder of a by b
        r = list(a)
        lb = b[-1]
        db = len(b) - 1
        while len(r) - 1 >= db and r:
            lr = r[-1]
            shift = len(r) - 1 - db
            r = [c * lb for c in r]
            for i, c in enumerate(b):
                r[i + shift] -= lr * c
            trim(r)
        a, b = b, trim(prim(r)) if r else []
    return a


def _clear_int(coeffs: list) -> list:
    den = 1
    for c in coeffs:
        den = den * c.denominator // igcd(den, c.denominator)
    return [int(c * den) for c in coeffs]


def univ_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Monic gcd of two univariate polynomials.

    Over Q this is a primitive PRS on integer-cleared inputs; over any other
    exact field it is the plain Euclidean algorithm.
    """
    _check_same(a, b)
    if len(a.vars) != 1:
        raise StructureError(f"univ_gcd needs univariate input, got {a.vars}")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if hasattr(a.domain, "univ_gcd"):
        return a.domain.univ_gcd(a, b)
    if a.domain == QQ:
        g = _univ_gcd_dense_int(_clear_int(a.to_dense()), _clear_int(b.to_dense()))
        return MultiPoly.from_dense([Fraction(c) for c in g], a.vars[0], QQ).monic()
    x, y = a.to_dense(), b.to_dense()
    while any(y):
        x, y = y, dense_divmod(x, y)[1]
    return MultiPoly.from_dense(x, a.vars[0], a.domain).monic()


def dense_trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def dense_divmod(a: list, b: list):
    """Euclidean division of coefficient lists over a field."""
    a = dense_trim(list(a))
    b = dense_trim(list(b))
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if len(a) < len(b):
        return [], a
    inv = 1 / b[-1]
    q = [None] * (len(a) - len(b) + 1)
    r = list(a)
    db = len(b) - 1
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + db] * inv
        q[k] = c
        if c:
            for i in range(db + 1):
                r[k + i] = r[k + i] - c * b[i]
    zero = r[0] - r[0]
    q = [c if c is not None else zero for c in q]
    return dense_trim(q), dense_trim(r[:db])


def squarefree_part(p: MultiPoly) -> MultiPoly:
    """``p / gcd(p, p')`` made monic (univariate, any exact field)."""
    if p.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    if len(p.vars) != 1:
        raise StructureError(f"squarefree_part needs univariate input, got {p.vars}")
    g = univ_gcd(p, p.derivative(0))
    q = dense_divmod(p.to_dense(), g.to_dense())[0]
    return MultiPoly.from_dense(q, p.vars[0], p.domain).monic()


def squarefree_factorization(p: MultiPoly) -> list:
    """Yun's algorithm: ``[(a_1, 1), (a_2, 2), ...]`` with monic squarefree a_i."""
    if p.is_zero() or p.degree() < 1:
        return []
    var, dom = p.vars[0], p.domain

    def mk(d):
        return MultiPoly.from_dense(d, var, dom)

    out = []
    dp = p.derivative(0)
    a = univ_gcd(p, dp)
    b = mk(dense_divmod(p.to_dense(), a.to_dense())[0])
    c = mk(dense_divmod(dp.to_dense(), a.to_dense())[0])
    d = c - b.derivative(0)
    i = 1
    while b.degree() > 0:
        a = univ_gcd(b, d)
        if a.degree() > 0:
            out.append((a, i))
        b = mk(dense_divmod(b.to_dense(), a.to_dense())[0])
        c = mk(dense_divmod(d.to_dense(), a.to_dense())[0])
        d = c - b.derivative(0)
        i += 1
    return out


def pseudo_rem(a: MultiPoly, b: MultiPoly, var) -> MultiPoly:
    """``lc(b)^(deg a - deg b + 1) * a mod b`` with respect to ``var``."""
    _check_same(a, b)
    i = a._index(var)
    db = b.degree(i)
    if db < 0:
        raise ZeroDivisionError("pseudo-remainder by zero")
    bc = b.coeffs_in(i)
    lb = bc[db]
    vars = a.vars
    r = a
    k = a.degree(i) - db + 1
    lb_full = _embed(lb, vars, i)
    while not r.is_zero() and r.degree(i) >= db:
        dr = r.degree(i)
        lr = _embed(r.coeffs_in(i)[dr], vars, i)
        shift = tuple(dr - db if j == i else 0 for j in range(len(vars)))
        r = r * lb_full - (lr * b).mul_term(shift, a.domain.one)
        k -= 1
    if k > 0:
        r = r * (lb_full ** k)
    return r


def _embed(p: MultiPoly, vars, i) -> MultiPoly:
    """Insert a zero exponent slot at position ``i``."""
    return MultiPoly(vars, {e[:i] + (0,) + e[i:]: c for e, c in p.terms.items()}, p.domain, _clean=True)


def _main_var(a: MultiPoly, b: MultiPoly):
    used = set(a.used_vars()) | set(b.used_vars())
    for i, v in enumerate(a.vars):
        if v in used:
            return i
    return None


def mpoly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """gcd over Q of multivariate polynomials, normalised to lc 1 (grevlex).

    Recursive content / primitive part with a primitive PRS in the main
    variable.  Adequate for the handful of parameters used here.
    """
    _check_same(a, b)
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return MultiPoly.constant(1, a.vars)
    used = set(a.used_vars()) | set(b.used_vars())
    if a.domain == QQ:
        g = _heu_gcd_poly(a, b, sorted(a.vars.index(v) for v in used))
        if g is not None:
            return g
    if len(used) == 1:
        v = next(iter(used))
        i = a.vars.index(v)
        ga = _univ_gcd_dense_int(_clear_int(a.to_dense(i)), _clear_int(b.to_dense(i)))
        return MultiPoly.from_dense([Fraction(c) for c in ga], v, QQ, vars=a.vars).monic()
    return _mgcd_rec(a, b).monic()


def _mul_qq(a: "MultiPoly", b: "MultiPoly") -> "MultiPoly":
    """Product over Q computed on integer numerators, one Fraction per output term."""
    da = db = 1
    for c in a.terms.values():
        da = da * c.denominator // igcd(da, c.denominator)
    for c in b.terms.values():
        db = db * c.denominator // igcd(db, c.denominator)
    ia = [(e, c.numerator * (da // c.denominator)) for e, c in a.terms.items()]
    ib = [(e, c.numerator * (db // c.denominator)) for e, c in b.terms.items()]
    out = {}
    get = out.get
    for ea, ca in ia:
        for eb, cb in ib:
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = get(e, 0) + ca * cb
    d = da * db
    return MultiPoly(a.vars, {e: Fraction(c, d) for e, c in out.items() if c}, QQ, _clean=True)


# heuristic gcd: evaluate at a large integer, recurse, lift the digits back

def _int_dict(p: MultiPoly, idx):
    den = 1
    for c in p.terms.values():
        den = den * c.denominator // igcd(den, c.denominator)
    return {tuple(e[i] for i in idx): int(c * den) for e, c in p.terms.items()}, den


def _int_content(f: dict) -> int:
    g = 0
    for c in f.values():
        g = igcd(g, c)
        if g == 1:
            break
    return g


def _eval_last(f: dict, x: int) -> dict:
    groups: dict = {}
    for e, c in f.items():
        groups.setdefault(e[:-1], {})[e[-1]] = c
    out = {}
    for k, cs in groups.items():
        v = 0
        for d in range(max(cs), -1, -1):  # Horner
            v = v * x + cs.get(d, 0)
        if v:
            out[k] = v
    return out


def _lift(h: dict, x: int) -> dict:
    """Read every coefficient as a balanced base-x number; digits become powers of the new variable."""
    out = {}
    half = x // 2
    for e, v in h.items():
        i = 0
        while v:
            d = v % x
            if d > half:
                d -= x
            if d:
                out[e + (i,)] = d
            v = (v - d) // x
            i += 1
    return out


def _int_quotient(f: dict, h: dict):
    """f / h in Z[x1..xk] when h divides f exactly, else None (lex division)."""
    if not h:
        return None
    r = dict(f)
    lm = max(h)
    lc = h[lm]
    rest = [(e, c) for e, c in h.items() if e != lm]
    quo = {}
    while r:
        m = max(r)
        if any(a < b for a, b in zip(m, lm)):
            return None
        q, rem = divmod(r[m], lc)
        if rem:
            return None
        del r[m]
        sh = tuple(a - b for a, b in zip(m, lm))
        quo[sh] = q
        for e, c in rest:
            k = tuple(a + b for a, b in zip(e, sh))
            v = r.get(k, 0) - q * c
            if v:
                r[k] = v
            else:
                r.pop(k, None)
    return quo


def _heu_gcd(f: dict, g: dict, k: int):
    """(gcd, f/gcd, g/gcd) in Z[x1..xk] for nonzero dicts, or None when the heuristic gives up."""
    if k == 0:
        a, b = f[()], g[()]
        h = igcd(a, b)
        return {(): h}, {(): a // h}, {(): b // h}
    cf, cg = _int_content(f), _int_content(g)
    c = igcd(cf, cg)
    f = {e: v // cf for e, v in f.items()}
    g = {e: v // cg for e, v in g.items()}
    nf = max(abs(v) for v in f.values())
    ng = max(abs(v) for v in g.values())
    B = min(nf, ng)
    x = max(min(B, 99 * isqrt(B)), 2 * min(nf // abs(f[max(f)]), ng // abs(g[max(g)]))) + 2
    for _ in range(6):
        ff, gg = _eval_last(f, x), _eval_last(g, x)
        if ff and gg:
            res = _heu_gcd(ff, gg, k - 1)
            if res is not None:
                H = _lift(res[0], x)
                if H:
                    ch = _int_content(H)
                    H = {e: v // ch for e, v in H.items()}
                    qf = _int_quotient(f, H)
                    qg = _int_quotient(g, H) if qf is not None else None
                    if qg is not None:
                        return ({e: v * c for e, v in H.items()},
                                {e: v * (cf // c) for e, v in qf.items()},
                                {e: v * (cg // c) for e, v in qg.items()})
        x = 73794 * x * isqrt(isqrt(x)) // 27011
    return None


def _from_int(d: dict, idx, vars, scale=1) -> MultiPoly:
    n = len(vars)
    terms = {}
    for e, c in d.items():
        full = [0] * n
        for i, k in zip(idx, e):
            full[i] = k
        terms[tuple(full)] = Fraction(c) * scale
    return MultiPoly(vars, terms, QQ)


def _heu_gcd_poly(a: MultiPoly, b: MultiPoly, idx, cofactors=False):
    fa, da = _int_dict(a, idx)
    fb, db = _int_dict(b, idx)
    res = _heu_gcd(fa, fb, len(idx))
    if res is None:
        return None
    g = _from_int(res[0], idx, a.vars)
    lc = g.lc()
    g = g * (1 / lc)
    if not cofactors:
        return g
    return g, _from_int(res[1], idx, a.vars, lc / da), _from_int(res[2], idx, a.vars, lc / db)


def mpoly_gcd_cofactors(a: MultiPoly, b: MultiPoly):
    """``(g, a/g, b/g)`` with g = mpoly_gcd(a, b); both inputs nonzero."""
    _check_same(a, b)
    if a.domain == QQ and not (a.is_constant() or b.is_constant()):
        used = set(a.used_vars()) | set(b.used_vars())
        res = _heu_gcd_poly(a, b, sorted(a.vars.index(v) for v in used), cofactors=True)
        if res is not None:
            return res
    g = mpoly_gcd(a, b)
    if g.is_constant():
        return g, a, b
    return g, divexact(a, g), divexact(b, g)


def _content_in(p: MultiPoly, i: int) -> MultiPoly:
    """gcd of the coefficients of ``p`` in variable ``i``, embedded back into p's ring."""
    coeffs = list(p.coeffs_in(i).values())
    g = coeffs[0]
    for c in coeffs[1:]:
        if g.is_constant():
            break
        g = mpoly_gcd(g, c)
    if g.is_constant():
        return MultiPoly.constant(1, p.vars)
    return _embed(g.monic(), p.vars, i)


def _mgcd_rec(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    i = _main_var(a, b)
    if a.degree(i) == 0 or b.degree(i) == 0:
        # one side free of the main variable: gcd lies in the coefficient ring
        if a.degree(i) == 0:
            a, b = b, a
        ca = _content_in(a, i)
        g = mpoly_gcd(ca, b) if not b.is_constant() else b
        return g
    ca, cb = _content_in(a, i), _content_in(b, i)
    pa, pb = divexact(a, ca), divexact(b, cb)
    cont = mpoly_gcd(ca, cb)
    if pa.degree(i) < pb.degree(i):
        pa, pb = pb, pa
    while True:
        r = pseudo_rem(pa, pb, i)
        if r.is_zero():
            g = pb
            break
        if r.degree(i) == 0:
            g = MultiPoly.constant(1, a.vars)
            break
        pa, pb = pb, divexact(r, _content_in(r, i)).primitive()
    if g.degree(i) > 0:
        g = divexact(g, _content_in(g, i))
    return (cont * g).primitive()


def mpoly_lcm(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if a.is_zero() or b.is_zero():
        return MultiPoly.zero(a.vars)
    return divexact(a * b, mpoly_gcd(a, b)).monic()


# ----------------------------------------------- determinants, resultants

def _dexact(x, y):
    if isinstance(x, MultiPoly):
        if y.is_constant():
            return x * (1 / y.constant_value())
        return divexact(x, y)
    return x / y


def bareiss_rows(matrix: list, ncols: int):
    """Fraction-free elimination of the first ``ncols`` columns.

    ``matrix`` is m x N (m - 1 <= ncols <= N) over an integral domain whose
    elements support exact division.  Returns ``(rows, sign)`` where, if the
    first ``m - 1`` columns were eliminated, ``sign * rows[m-1][j]`` is the
    determinant of the original columns ``0..m-2`` together with column j.
    Returns ``(None, 0)`` when those columns are rank deficient.
    """
    M = [list(r) for r in matrix]
    m = len(M)
    if m == 0:
        return M, 1
    N = len(M[0])
    sign = 1
    prev = None
    for k in range(min(ncols, m - 1)):
        if not M[k][k]:
            for r in range(k + 1, m):
                if M[r][k]:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return None, 0
        pk = M[k][k]
        for i in range(k + 1, m):
            mik = M[i][k]
            row_i, row_k = M[i], M[k]
            for j in range(k + 1, N):
                v = row_i[j] * pk - mik * row_k[j]
                if prev is not None and v:
                    v = _dexact(v, prev)
                row_i[j] = v
            row_i[k] = pk - pk
        prev = pk
    return M, sign


def det_bareiss(matrix: list, zero=Fraction(0), one=Fraction(1)):
    """Determinant of a square matrix over an integral domain."""
    m = len(matrix)
    if m == 0:
        return one
    if m == 1:
        return matrix[0][0]
    rows, sign = bareiss_rows(matrix, m - 1)
    if rows is None:
        return zero
    v = rows[m - 1][m - 1]
    return v if sign > 0 else -v


def sylvester_matrix(a: MultiPoly, b: MultiPoly, var) -> list:
    """Rows ``x^(q-1) a, ..., a, x^(p-1) b, ..., b`` with coefficients in the other variables."""
    i = a._index(var)
    p, q = a.degree(i), b.degree(i)
    ac, bc = a.coeffs_in(i), b.coeffs_in(i)
    rest = a.vars[:i] + a.vars[i + 1:]
    z = MultiPoly.zero(rest, a.domain)
    N = p + q
    rows = []
    # column c holds the coefficient of x^(N-1-c)
    for shift in range(q - 1, -1, -1):
        rows.append([ac.get(N - 1 - c - shift, z) for c in range(N)])
    for shift in range(p - 1, -1, -1):
        rows.append([bc.get(N - 1 - c - shift, z) for c in range(N)])
    return rows


def resultant_univ(a: MultiPoly, b: MultiPoly, var=None) -> MultiPoly:
    """Sylvester resultant in ``var``; result lives in the remaining variables."""
    _check_same(a, b)
    if var is None:
        if len(a.vars) != 1:
            raise StructureError("specify the main variable of a multivariate input")
        var = 0
    i = a._index(var)
    p, q = a.degree(i), b.degree(i)
    rest = a.vars[:i] + a.vars[i + 1:]
    if p <= 0 and q <= 0:
        raise ValueError("resultant of two constants is undefined")
    if p < 0 or q < 0:
        return MultiPoly.zero(rest, a.domain)
    if q == 0:
        return b.coeffs_in(i)[0] ** p
    if p == 0:
        return a.coeffs_in(i)[0] ** q
    S = sylvester_matrix(a, b, i)
    zero = MultiPoly.zero(rest, a.domain)
    one = MultiPoly.constant(1, rest, a.domain)
    return det_bareiss(S, zero, one)


def discriminant(p: MultiPoly, var=None) -> MultiPoly:
    """``(-1)^(d(d-1)/2) Res(p, p') / lc(p)``."""
    if var is None:
        if len(p.vars) != 1:
            raise StructureError("specify the main variable of a multivariate input")
        var = 0
    i = p._index(var)
    d = p.degree(i)
    if d < 1:
        raise ValueError("discriminant needs positive degree")
    rest = p.vars[:i] + p.vars[i + 1:]
    if d == 1:
        return MultiPoly.constant(1, rest, p.domain)
    r = resultant_univ(p, p.derivative(i), i)
    lc = p.coeffs_in(i)[d]
    v = _dexact(r, lc)
    return -v if (d * (d - 1) // 2) % 2 else v

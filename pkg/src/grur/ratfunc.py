"""Rational functions in the parameters, and polynomials over them.

``RatFunc`` is num/den with both in Q[W], kept reduced with a monic
denominator (leading coefficient 1 under grevlex on W), so equality is
structural.  A "parametric polynomial" is simply a :class:`MultiPoly` in the
unknowns whose domain is a :class:`RatFuncField`.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import DenominatorVanishes, StructureError
from .poly import QQ, MultiPoly, mpoly_gcd, mpoly_gcd_cofactors, mpoly_lcm


class RatFuncField:
    """The field Q(W) over an ordered parameter list."""

    def __init__(self, params: Sequence[str]):
        self.params = tuple(params)
        self.zero = RatFunc(MultiPoly.zero(self.params), None, _reduced=True)
        self.one = RatFunc(MultiPoly.constant(1, self.params), None, _reduced=True)

    @property
    def name(self):
        return f"QQ({', '.join(self.params)})"

    def convert(self, x):
        if isinstance(x, RatFunc):
            if x.num.vars != self.params:
                raise StructureError(f"parameter mismatch: {x.num.vars} vs {self.params}")
            return x
        if isinstance(x, MultiPoly):
            return RatFunc(x.change_ring(self.params) if x.vars != self.params else x)
        if isinstance(x, (int, Fraction, str)):
            return RatFunc(MultiPoly.constant(Fraction(x), self.params), None, _reduced=True)
        raise TypeError(f"cannot convert {x!r} into {self.name}")

    def gen(self, name):
        return RatFunc(MultiPoly.var(name, self.params), None, _reduced=True)

    def univ_gcd(self, a: MultiPoly, b: MultiPoly) -> MultiPoly:
        """Monic gcd in Q(W)[x]: clear denominators and take the gcd in Q[W, x]."""
        A, B = flatten(clear_denominators(a)), flatten(clear_denominators(b))
        return to_parampoly(mpoly_gcd(A, B), self, a.vars).monic()

    def __eq__(self, other):
        return isinstance(other, RatFuncField) and other.params == self.params

    def __hash__(self):
        return hash(("QQ(W)", self.params))

    def __repr__(self):
        return self.name


class RatFunc:
    """Reduced fraction ``num / den`` of polynomials in the parameters.

    ``den`` is stored as None when it is 1, which keeps the common case of
    polynomial coefficients cheap.
    """

    __slots__ = ("num", "_den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, *, _reduced=False):
        if den is not None and den.vars != num.vars:
            raise StructureError(f"ring mismatch: {num.vars} vs {den.vars}")
        if den is not None and den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if _reduced or den is None:
            self.num, self._den = num, den
            return
        if num.is_zero():
            self.num, self._den = num, None
            return
        if den.is_constant():
            c = den.constant_value()
            self.num, self._den = (num * (1 / c) if c != 1 else num), None
            return
        _, num, den = mpoly_gcd_cofactors(num, den)
        lc = den.lc()
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        self.num = num
        self._den = None if den.is_constant() else den

    @property
    def den(self) -> MultiPoly:
        return self._den if self._den is not None else MultiPoly.constant(1, self.num.vars)

    @property
    def params(self):
        return self.num.vars

    def is_polynomial(self):
        return self._den is None

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.num.vars != self.num.vars:
                raise StructureError(f"parameter mismatch: {self.num.vars} vs {other.num.vars}")
            return other
        if isinstance(other, MultiPoly):
            if isinstance(other.domain, RatFuncField):
                return NotImplemented
            return RatFunc(other)
        return RatFunc(MultiPoly.constant(other, self.num.vars), None, _reduced=True)

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, StructureError):
            return NotImplemented
        return self.num == o.num and self._den == o._den

    def __hash__(self):
        return hash((self.num, self._den))

    def __neg__(self):
        return RatFunc(-self.num, self._den, _reduced=True)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self._den is None and o._den is None:
            return RatFunc(self.num + o.num, None, _reduced=True)
        if self._den is not None and self._den == o._den:
            return RatFunc(self.num + o.num, self._den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self._den is None and o._den is None:
            return RatFunc(self.num * o.num, None, _reduced=True)
        if not self or not o:
            return RatFunc(MultiPoly.zero(self.num.vars), None, _reduced=True)
        if o.num.is_constant() and o._den is None:
            return RatFunc(self.num * o.num.constant_value(), self._den, _reduced=True)
        if self.num.is_constant() and self._den is None:
            return RatFunc(o.num * self.num.constant_value(), o._den, _reduced=True)
        # cross-cancel before multiplying keeps the gcd small
        a, d1 = self.num, o.den
        b, d2 = o.num, self.den
        _, a, d1 = mpoly_gcd_cofactors(a, d1)
        _, b, d2 = mpoly_gcd_cofactors(b, d2)
        num, den = a * b, d1 * d2
        if num.is_zero():
            return RatFunc(num, None, _reduced=True)
        if den.is_constant():
            return RatFunc(num * (1 / den.constant_value()), None, _reduced=True)
        lc = den.lc()
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        return RatFunc(num, den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, None if self._den is None else self._den ** k, _reduced=True)

    def is_constant(self):
        return self._den is None and self.num.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value()

    def evaluate(self, point) -> Fraction:
        """Value at ``point`` (mapping or sequence aligned with the parameters)."""
        if not isinstance(point, dict):
            point = dict(zip(self.num.vars, point))
        if self._den is not None:
            d = self._den.evaluate(point)
            if not d:
                raise DenominatorVanishes(point, str(self._den))
            return self.num.evaluate(point) / d
        return self.num.evaluate(point)

    def __str__(self):
        if self._den is None:
            return str(self.num)
        n, d = str(self.num), str(self._den)
        if len(self.num.terms) > 1 or n.startswith("-"):
            n = f"({n})"
        if len(self._den.terms) > 1 or not self._den.is_constant() and next(iter(self._den.terms.values())) != 1:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RatFunc({self})"


# ---------------------------------------------------- parametric polynomials

def sum_of_products(pairs, field: RatFuncField) -> RatFunc:
    """``sum(a * b for a, b in pairs)`` with one normalisation per distinct denominator."""
    groups: dict = {}
    for a, b in pairs:
        if a._den is None:
            den = b._den
        elif b._den is None:
            den = a._den
        else:
            den = a._den * b._den
        num = a.num * b.num
        prev = groups.get(den)
        groups[den] = num if prev is None else prev + num
    total = field.zero
    for den, num in groups.items():
        if num.is_zero():
            continue
        total = total + (RatFunc(num, None, _reduced=True) if den is None else RatFunc(num, den))
    return total


def to_parampoly(p: MultiPoly, field: RatFuncField, vars: Sequence[str]) -> MultiPoly:
    """View ``p`` in Q[W, X] (or Q(W)[X]) as a polynomial in ``vars`` over ``field``."""
    vars = tuple(vars)
    if isinstance(p.domain, RatFuncField):
        return p.change_ring(vars)
    for v in p.vars:
        if v not in vars and v not in field.params:
            raise StructureError(f"variable {v!r} is neither a parameter nor an unknown")
    xi = [p.vars.index(v) if v in p.vars else None for v in vars]
    wi = [p.vars.index(v) if v in p.vars else None for v in field.params]
    buckets: dict = {}
    for e, c in p.terms.items():
        ex = tuple(e[i] if i is not None else 0 for i in xi)
        ew = tuple(e[i] if i is not None else 0 for i in wi)
        buckets.setdefault(ex, {})[ew] = c
    terms = {ex: RatFunc(MultiPoly(field.params, t, QQ, _clean=True), None, _reduced=True)
             for ex, t in buckets.items()}
    return MultiPoly(vars, terms, field, _clean=True)


def parampoly_specialize(p: MultiPoly, w) -> MultiPoly:
    """Coefficient-wise evaluation at the parameter point ``w``."""
    if not isinstance(p.domain, RatFuncField):
        return p
    if not isinstance(w, dict):
        w = dict(zip(p.domain.params, w))
    out = {}
    for e, c in p.terms.items():
        v = c.evaluate(w)
        if v:
            out[e] = v
    return MultiPoly(p.vars, out, QQ, _clean=True)


def leading_coefficient(p: MultiPoly, order=None):
    """``(lc, numerator of lc)``; the numerator defines the vanishing locus."""
    c = p.lc(order)
    return c, c.num


def denominator_lcm(p: MultiPoly) -> MultiPoly:
    """lcm of the coefficient denominators of a parametric polynomial."""
    params = p.domain.params
    out = MultiPoly.constant(1, params)
    for c in p.terms.values():
        if not c.is_polynomial():
            out = mpoly_lcm(out, c.den)
    return out


def clear_denominators(p: MultiPoly) -> MultiPoly:
    """``denominator_lcm(p) * p`` with coefficients in Q[W] (still over Q(W))."""
    L = denominator_lcm(p)
    if L.is_constant():
        return p
    Lr = RatFunc(L, None, _reduced=True)
    return p.map_coeffs(lambda c: c * Lr)


def flatten(p: MultiPoly) -> MultiPoly:
    """Polynomial over Q(W) with polynomial coefficients -> element of Q[W, X]."""
    params = p.domain.params
    vars = params + p.vars
    out = {}
    for ex, c in p.terms.items():
        if not c.is_polynomial():
            raise ValueError("coefficient has a nontrivial denominator; clear it first")
        for ew, q in c.num.terms.items():
            out[ew + ex] = q
    return MultiPoly(vars, out, QQ, _clean=True)

"""Buchberger's algorithm over an exact coefficient field.

The same code runs over Q (``Fraction`` coefficients) and over Q(W)
(``RatFunc`` coefficients); the only requirement on the domain is exact
field arithmetic and a zero test.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import StructureError
from .poly import MonomialOrder, MultiPoly, grevlex, mono_div, mono_divides, mono_lcm, mpoly_lcm
from .ratfunc import RatFuncField


def _neg(k):
    if isinstance(k, tuple):
        return tuple(_neg(x) for x in k)
    return -k


@dataclass(frozen=True)
class GroebnerBasis:
    elements: tuple
    order: MonomialOrder
    vars: tuple
    domain: object
    reduced: bool = True

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def leading_monomials(self):
        return [g.lm(self.order) for g in self.elements]

    def is_unit(self):
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def normal_form(self, p: MultiPoly) -> MultiPoly:
        return normal_form(p, self)


class _Reducer:
    """Precomputed reduction data for a list of monic polynomials."""

    def __init__(self, polys, order):
        self.order = order
        self.items = []
        for g in polys:
            lm = g.lm(order)
            tail = [(e, c) for e, c in g.terms.items() if e != lm]
            self.items.append((lm, tail))

    def find(self, e):
        for lm, tail in self.items:
            q = mono_div(e, lm)
            if q is not None:
                return q, tail
        return None

    def reduce(self, p: MultiPoly, full=True) -> MultiPoly:
        if not self.items or p.is_zero():
            return p
        key = self.order.key
        rem = dict(p.terms)
        heap = [(_neg(key(e)), e) for e in rem]
        heapq.heapify(heap)
        queued = set(rem)
        out = {}
        while heap:
            _, e = heapq.heappop(heap)
            queued.discard(e)
            c = rem.pop(e, None)
            if c is None or not c:
                continue
            hit = self.find(e)
            if hit is None:
                if not full:
                    out[e] = c
                    out.update(rem)
                    break
                out[e] = c
                continue
            q, tail = hit
            for et, ct in tail:
                k = tuple(x + y for x, y in zip(q, et))
                v = rem.get(k)
                v = -c * ct if v is None else v - c * ct
                if v:
                    rem[k] = v
                    if k not in queued:
                        queued.add(k)
                        heapq.heappush(heap, (_neg(key(k)), k))
                else:
                    rem.pop(k, None)
        return MultiPoly(p.vars, out, p.domain, _clean=True)


def _spoly(f: MultiPoly, g: MultiPoly, order) -> MultiPoly:
    lf, lg = f.lm(order), g.lm(order)
    L = mono_lcm(lf, lg)
    one = f.domain.one
    return f.mul_term(mono_div(L, lf), one) - g.mul_term(mono_div(L, lg), one)


def _check_inputs(generators):
    if not generators:
        raise StructureError("empty generator list")
    vars, dom = generators[0].vars, generators[0].domain
    for g in generators:
        if g.vars != vars or g.domain != dom:
            raise StructureError("generators live in different rings")
    return vars, dom


def interreduce(polys, order) -> list:
    """Reduced form of a Gröbner basis: minimal, interreduced, monic, sorted by leading monomial."""
    polys = [p.monic(order) for p in polys if not p.is_zero()]
    polys.sort(key=lambda p: order.key(p.lm(order)))
    minimal = []
    for p in polys:
        lm = p.lm(order)
        if not any(mono_divides(q.lm(order), lm) for q in minimal):
            minimal.append(p)
    out = []
    for i, p in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        out.append(_Reducer(others, order).reduce(p).monic(order))
    out.sort(key=lambda p: order.key(p.lm(order)))
    return out


def buchberger(generators, order: MonomialOrder | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal spanned by ``generators``.

    Pairs are processed smallest lcm first; the product criterion and
    Buchberger's chain criterion discard useless pairs.  The zero ideal
    yields an empty basis and the unit ideal yields ``[1]``.
    """
    generators = list(generators)
    vars, dom = _check_inputs(generators)
    order = order or grevlex(len(vars))
    if order.nvars != len(vars):
        raise StructureError("order arity does not match the ring")
    G: list = []
    for p in generators:
        if p.is_zero():
            continue
        if p.is_constant():
            return GroebnerBasis((MultiPoly.constant(1, vars, dom),), order, vars, dom)
        G.append(p.monic(order))
    if not G:
        return GroebnerBasis((), order, vars, dom)
    G = list(dict.fromkeys(G))
    key = order.key
    lms = [g.lm(order) for g in G]
    pairs = set()
    heap = []

    def push(i, j):
        L = mono_lcm(lms[i], lms[j])
        pairs.add((i, j))
        heapq.heappush(heap, (key(L), i, j))

    for j in range(len(G)):
        for i in range(j):
            push(i, j)
    while heap:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in pairs:
            continue
        pairs.discard((i, j))
        a, b = lms[i], lms[j]
        if all(x == 0 or y == 0 for x, y in zip(a, b)):
            continue
        L = mono_lcm(a, b)
        chain = False
        for k in range(len(G)):
            if k in (i, j) or not mono_divides(lms[k], L):
                continue
            if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                chain = True
                break
        if chain:
            continue
        h = _Reducer(G, order).reduce(_spoly(G[i], G[j], order))
        if h.is_zero():
            continue
        h = h.monic(order)
        if h.is_constant():
            return GroebnerBasis((MultiPoly.constant(1, vars, dom),), order, vars, dom)
        G.append(h)
        lms.append(h.lm(order))
        n = len(G) - 1
        for i2 in range(n):
            push(i2, n)
    return GroebnerBasis(tuple(interreduce(G, order)), order, vars, dom)


def normal_form(p: MultiPoly, basis: GroebnerBasis) -> MultiPoly:
    if p.vars != basis.vars:
        raise StructureError(f"ring mismatch: {p.vars} vs {basis.vars}")
    return _Reducer(basis.elements, basis.order).reduce(p)


def spolys_reduce_to_zero(basis: GroebnerBasis) -> bool:
    """Buchberger's criterion, checked on every pair."""
    els = basis.elements
    red = _Reducer(els, basis.order)
    for j in range(len(els)):
        for i in range(j):
            if not red.reduce(_spoly(els[i], els[j], basis.order)).is_zero():
                return False
    return True


def dimension_check(basis: GroebnerBasis) -> str:
    """``"zero_dimensional"`` iff every unknown has a pure-power leading monomial."""
    if not basis.elements:
        return "positive_dimensional"
    if basis.is_unit():
        return "zero_dimensional"
    n = len(basis.vars)
    have = [False] * n
    for lm in basis.leading_monomials():
        nz = [i for i, x in enumerate(lm) if x]
        if len(nz) == 1:
            have[nz[0]] = True
    return "zero_dimensional" if all(have) else "positive_dimensional"


def specialization_locus_certificates(basis: GroebnerBasis) -> list:
    """Per element: numerator of its leading coefficient times the lcm of its denominators."""
    if not isinstance(basis.domain, RatFuncField):
        return [MultiPoly.constant(1, ()) for _ in basis.elements]
    params = basis.domain.params
    out = []
    for g in basis.elements:
        L = MultiPoly.constant(1, params)
        for c in g.terms.values():
            if not c.is_polynomial():
                L = mpoly_lcm(L, c.den)
        lc = g.lc(basis.order)
        cert = (lc.num * L).monic()
        out.append(cert)
    return out

"""Rational univariate representations from a quotient structure.

The characteristic polynomial of a linear form comes from power traces via
Newton's identities, and the coordinate numerators from traces combined with
the Hörner polynomials of that characteristic polynomial.  With
``h1 = h0'`` the solutions are ``X_i = hX_i(u) / h1(u)`` over the roots
``u`` of ``h0``, multiplicities included.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import (DenominatorVanishes, FormSearchFailed, NoSolutions,
                     NotZeroDimensional, WitnessSearchExhausted)
from .groebner import GroebnerBasis, buchberger, dimension_check, specialization_locus_certificates
from .poly import QQ, MultiPoly, divexact, grevlex, mpoly_lcm, squarefree_part
from .quotient import (QuotientStructure, build_quotient, dot, hermite_matrix, mat_add,
                       mat_scale, mat_vec, rank, specialize_matrix)
from .ratfunc import RatFunc, RatFuncField, parampoly_specialize, sum_of_products

U0 = "U0"
WITNESS_RANGE = 2 ** 16
WITNESS_DRAWS = 64


@dataclass(frozen=True)
class LinearForm:
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        if not any(self.coeffs):
            raise ValueError("the zero form separates nothing")

    @property
    def n(self):
        return len(self.coeffs)

    @classmethod
    def coordinate(cls, i: int, n: int) -> "LinearForm":
        return cls(tuple(1 if j == i else 0 for j in range(n)))

    def to_poly(self, vars, domain=QQ) -> MultiPoly:
        out = MultiPoly.zero(vars, domain)
        for a, v in zip(self.coeffs, vars):
            if a:
                out = out + MultiPoly.var(v, vars, domain) * a
        return out

    def value(self, point) -> object:
        return sum(a * x for a, x in zip(self.coeffs, point))

    def matrix(self, qs: QuotientStructure):
        M = None
        for a, Mi in zip(self.coeffs, qs.mult_matrices):
            if a:
                term = mat_scale(Mi, a)
                M = term if M is None else mat_add(M, term)
        return M

    def label(self, vars) -> str:
        return str(self.to_poly(vars))


@dataclass
class GRUR:
    """``h0, h1, hX`` in the single variable U0 over Q(W) or over Q."""

    t: LinearForm
    h0: MultiPoly
    h1: MultiPoly
    hX: list
    vars: tuple
    params: tuple
    separating_certified: bool = True
    certificates: list = field(default_factory=list)
    witness: tuple | None = None
    meta: dict = field(default_factory=dict, repr=False)

    @property
    def D(self) -> int:
        return self.h0.degree()

    @property
    def field(self) -> str:
        return "Q" if not self.params else "Q(" + ",".join(self.params) + ")"

    def polys(self):
        return [self.h0, self.h1, *self.hX]

    def __eq__(self, other):
        if not isinstance(other, GRUR):
            return NotImplemented
        return (self.t == other.t and self.vars == other.vars and self.params == other.params
                and self.h0 == other.h0 and self.h1 == other.h1 and list(self.hX) == list(other.hX))


@dataclass(frozen=True)
class HornerSequence:
    H: tuple
    b: tuple

    def __getitem__(self, i):
        return self.H[i]

    def __len__(self):
        return len(self.H)


@dataclass(frozen=True)
class SeparationVerdict:
    separating: bool
    witness: tuple
    squarefree_degree: int
    distinct_points: int

    def __bool__(self):
        return self.separating


# --------------------------------------------------------------- formulas

def _cleared_matrix(M, field: RatFuncField):
    """``(L, P)`` with ``M = P / L``, L in Q[W] and P a matrix over Q[W]."""
    L = MultiPoly.constant(1, field.params)
    for row in M:
        for c in row:
            if c and not c.is_polynomial():
                L = mpoly_lcm(L, c.den)
    zero = MultiPoly.zero(field.params)
    P = [[(c.num * divexact(L, c.den) if not c.is_polynomial() else c.num * L) if c else zero
          for c in row] for row in M]
    return L, P


def krylov_dots(qs: QuotientStructure, t: LinearForm, rows, count: int) -> list:
    """``[[r . M_t^i e_1 for i in 0..count] for r in rows]``.

    Over Q(W) the iteration runs on the cleared matrix ``M_t = P / L`` so the
    vectors stay polynomial; only the final dot products are normalised.
    """
    Mt = t.matrix(qs)
    dom = qs.domain
    D = qs.D
    out = [[] for _ in rows]
    if not isinstance(dom, RatFuncField):
        v = [dom.one] + [dom.zero] * (D - 1)
        for i in range(count + 1):
            for k, r in enumerate(rows):
                out[k].append(dot(r, v))
            if i < count:
                v = mat_vec(Mt, v)
        return out
    L, P = _cleared_matrix(Mt, dom)
    one = MultiPoly.constant(1, dom.params)
    zero = MultiPoly.zero(dom.params)
    v = [one] + [zero] * (D - 1)
    Lpow = one
    for i in range(count + 1):
        vr = [RatFunc(c, None, _reduced=True) for c in v]
        for k, r in enumerate(rows):
            pairs = [(a, b) for a, b in zip(r, vr) if a and b]
            s = sum_of_products(pairs, dom) if pairs else dom.zero
            if s and not Lpow.is_constant():
                s = s * RatFunc(one, Lpow)
            out[k].append(s)
        if i < count:
            v = [_poly_dot(row, v, zero) for row in P]
            Lpow = Lpow * L
    return out


def _poly_dot(row, v, zero):
    s = zero
    for a, b in zip(row, v):
        if a and b:
            s = s + a * b
    return s


def power_traces(qs: QuotientStructure, t: LinearForm, count: int | None = None) -> list:
    """``Trace(t^i)`` for i = 0..count (default D), iterating ``v <- M_t v`` from 1."""
    count = qs.D if count is None else count
    return krylov_dots(qs, t, [qs.traces], count)[0]


def newton_coefficients(N: list, D: int) -> list:
    """``b_0..b_D`` from power sums ``N_0..N_D`` via (D-k) b_k = sum_{i<=k} b_{k-i} N_i."""
    b = [N[0] - N[0] + 1]
    for k in range(1, D + 1):
        s = None
        for i in range(1, k + 1):
            if b[k - i] and N[i]:
                s = b[k - i] * N[i] if s is None else s + b[k - i] * N[i]
        b.append(-(s / k) if s is not None else b[0] - b[0])
    return b


def characteristic_polynomial(qs: QuotientStructure, t: LinearForm) -> MultiPoly:
    D = qs.D
    b = newton_coefficients(power_traces(qs, t), D)
    return MultiPoly.from_dense([b[D - i] for i in range(D + 1)], U0, qs.domain)


def horner_sequence(h0: MultiPoly) -> HornerSequence:
    c = h0.to_dense()
    D = len(c) - 1
    if c[-1] != 1:
        raise ValueError("Hörner sequence needs a monic polynomial")
    b = tuple(c[D - j] for j in range(D + 1))
    U = MultiPoly.var(U0, (U0,), h0.domain)
    H = [MultiPoly.constant(1, (U0,), h0.domain)]
    for i in range(1, D):
        H.append(U * H[-1] + b[i])
    return HornerSequence(tuple(H), b)


def rur_numerators(qs: QuotientStructure, t: LinearForm, h0: MultiPoly) -> list:
    """``hX_j = sum_i Trace(X_j t^i) H_{D-i-1}`` for every unknown.

    ``Trace(X_j t^i)`` is the dot product of ``M_j^T traces`` with ``M_t^i e_1``.
    """
    D = qs.D
    H = horner_sequence(h0)
    dom = qs.domain
    rows = [mat_vec([list(c) for c in zip(*Mj)], qs.traces) for Mj in qs.mult_matrices]
    out = []
    for trs in krylov_dots(qs, t, rows, D - 1):
        acc = MultiPoly.zero((U0,), dom)
        for i, tr in enumerate(trs):
            if tr:
                acc = acc + H[D - i - 1] * tr
        out.append(acc)
    return out


def candidate_forms(n: int, D: int) -> Iterator[LinearForm]:
    """Coordinate forms first, then ``X1 + k X2 + ... + k^(n-1) Xn``.

    For n = 2 the range of k is 1..D(D-1)/2; for larger n it is widened by a
    factor n - 1 so that a separating member is guaranteed to exist.
    """
    if n < 1 or D < 1:
        raise ValueError("need n >= 1 and D >= 1")
    for i in range(n):
        yield LinearForm.coordinate(i, n)
    if n == 1:
        return
    for k in range(1, max(1, n - 1) * D * (D - 1) // 2 + 1):
        yield LinearForm(tuple(k ** i for i in range(n)))


# ------------------------------------------------------------ separation

def distinct_points(qs: QuotientStructure) -> int:
    """Number of distinct solutions, as the rank of the Hermite matrix."""
    return rank(hermite_matrix(qs))


def squarefree_degree(chi: MultiPoly) -> int:
    return squarefree_part(chi).degree()


def separates(qs: QuotientStructure, chi: MultiPoly) -> SeparationVerdict:
    """Exact check over Q: t separates iff its distinct values match the distinct points."""
    d = squarefree_degree(chi)
    r = distinct_points(qs)
    return SeparationVerdict(d == r, (), d, r)


def _nonconstant(polys):
    seen, out = set(), []
    for p in polys:
        if p.is_zero() or p.is_constant():
            continue
        p = p.monic()
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def input_certificates(system: Sequence[MultiPoly]) -> list:
    """Numerators and denominators of the input coefficients' leading terms."""
    out = []
    for f in system:
        if isinstance(f.domain, RatFuncField) and not f.is_zero():
            c = f.lc()
            out.append(c.num)
            for a in f.terms.values():
                if not a.is_polynomial():
                    out.append(a.den)
    return _nonconstant(out)


def good_specialization(system, basis: GroebnerBasis, w) -> GroebnerBasis | None:
    """Gröbner basis of the specialized system when it equals the specialized basis, else None."""
    try:
        fw = [parampoly_specialize(f, w) for f in system]
        gw = [parampoly_specialize(g, w) for g in basis.elements]
    except DenominatorVanishes:
        return None
    if any(not g.is_zero() and g.lc(basis.order) == 0 for g in gw):
        return None
    Gw = buchberger(fw, basis.order)
    if tuple(Gw.elements) != tuple(gw):
        return None
    return Gw


def _draw(rng: random.Random, s: int) -> tuple:
    return tuple(Fraction(rng.randint(1, WITNESS_RANGE)) for _ in range(s))


def is_generically_separating(qs: QuotientStructure, t: LinearForm, rng=None, *,
                              system=None, chi=None, certificates=None) -> SeparationVerdict:
    """Decide whether ``t`` separates the generic fibre.

    A witness point w avoiding every certificate is drawn; t separates
    generically iff it separates at w, which is checked by comparing the
    number of distinct roots of the specialized characteristic polynomial
    with the rank of the specialized Hermite matrix.
    """
    if chi is None:
        chi = characteristic_polynomial(qs, t)
    if not isinstance(qs.domain, RatFuncField):
        return separates(qs, chi)
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    params = qs.domain.params
    sf = squarefree_part(chi)
    certs = list(certificates or [])
    for c in list(chi.terms.values()) + list(sf.terms.values()):
        certs.append(c.den)
    if qs.groebner is not None:
        certs += specialization_locus_certificates(qs.groebner)
    if system is not None:
        certs += input_certificates(system)
    certs = _nonconstant(certs)
    H = None
    for _ in range(WITNESS_DRAWS):
        w = _draw(rng, len(params))
        pt = dict(zip(params, w))
        if any(c.evaluate(pt) == 0 for c in certs):
            continue
        chi_w = parampoly_specialize(chi, pt)
        # w must keep sf(chi) squarefree of the same degree, i.e. avoid its discriminant
        if squarefree_degree(parampoly_specialize(sf, pt)) != sf.degree():
            continue
        if system is not None and qs.groebner is not None:
            Gw = good_specialization(system, qs.groebner, pt)
            if Gw is None:
                continue
            r = distinct_points(build_quotient(Gw))
        else:
            if H is None:
                H = hermite_matrix(qs)
            r = rank(specialize_matrix(H, pt))
        d = squarefree_degree(chi_w)
        return SeparationVerdict(d == r, w, d, r)
    raise WitnessSearchExhausted(f"no admissible witness in {WITNESS_DRAWS} draws")


# ------------------------------------------------------------ pipelines

def groebner_and_quotient(system: Sequence[MultiPoly]):
    n = len(system[0].vars)
    G = buchberger(system, grevlex(n))
    if G.is_unit():
        raise NoSolutions("the system has no solutions")
    if dimension_check(G) != "zero_dimensional":
        raise NotZeroDimensional("the system is not zero-dimensional")
    return G, build_quotient(G)


def grur_certificates(system, G: GroebnerBasis, polys) -> list:
    """Polynomials in W whose zeros are excluded from specialization claims."""
    out = list(specialization_locus_certificates(G)) + input_certificates(system)
    for p in polys:
        for c in p.terms.values():
            if isinstance(c, RatFunc) and not c.is_polynomial():
                out.append(c.den)
    return _nonconstant(out)


def assemble_grur(qs: QuotientStructure, t: LinearForm, chi: MultiPoly, params, **kw) -> GRUR:
    hX = rur_numerators(qs, t, chi)
    return GRUR(t, chi, chi.derivative(0), hX, qs.vars, tuple(params), **kw)


def grur_la(system: Sequence[MultiPoly], seed=0, forms=None) -> GRUR:
    """Generic RUR by linear algebra over Q(W) (or plain RUR over Q)."""
    system = list(system)
    G, qs = groebner_and_quotient(system)
    rng = random.Random(seed)
    params = qs.domain.params if isinstance(qs.domain, RatFuncField) else ()
    for t in (forms if forms is not None else candidate_forms(qs.n, qs.D)):
        chi = characteristic_polynomial(qs, t)
        verdict = is_generically_separating(qs, t, rng, system=system, chi=chi)
        if verdict:
            g = assemble_grur(qs, t, chi, params, witness=verdict.witness)
            g.certificates = grur_certificates(system, G, g.polys()) if params else []
            return g
    raise FormSearchFailed("no candidate linear form separates the solutions")


def specialize_grur(g: GRUR, w) -> GRUR:
    """Coefficient-wise evaluation of a parametric GRUR at ``w``."""
    if not g.params:
        return g
    if not isinstance(w, dict):
        w = dict(zip(g.params, w))
    polys = [parampoly_specialize(p, w) for p in g.polys()]
    return GRUR(g.t, polys[0], polys[1], polys[2:], g.vars, (), g.separating_certified)

"""Signed subresultants, Sturm-Habicht root counting and parameter classification."""
from __future__ import annotations

import itertools
from math import gcd as igcd
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import EmptySampleSet, StructureError
from .poly import QQ, MultiPoly, _int_quotient, squarefree_part
from .ratfunc import RatFuncField, denominator_lcm
from .rur import GRUR, U0, grur_la


@dataclass
class SubresultantSequence:
    """``polys[k]`` is sRes_{d-k}; likewise for ``principal_coeffs``."""

    main_var: str
    polys: list
    principal_coeffs: list

    @property
    def degree(self) -> int:
        return len(self.polys) - 1

    def sres(self, j: int) -> MultiPoly:
        return self.polys[self.degree - j]

    def principal(self, j: int) -> MultiPoly:
        return self.principal_coeffs[self.degree - j]


# Polynomials in the main variable with integer polynomial coefficients:
# {degree: {exponents of the other variables: int}}.

def _cmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            k = tuple(x + y for x, y in zip(ea, eb))
            out[k] = out.get(k, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _csub(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) - c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _cdiv(a: dict, b: dict) -> dict:
    if not a:
        return {}
    q = _int_quotient(a, b)
    if q is None:
        raise ArithmeticError("inexact division in the subresultant recurrence")
    return q


def _cpow(a: dict, k: int, unit: dict) -> dict:
    out = unit
    for _ in range(k):
        out = _cmul(out, a)
    return out


def _pmul(P: dict, c: dict) -> dict:
    return {d: v for d, a in P.items() if (v := _cmul(a, c))}


def _pdiv(P: dict, c: dict) -> dict:
    return {d: _cdiv(a, c) for d, a in P.items()}


def _prem(A: dict, B: dict) -> tuple:
    """Pseudo-remainder ``lc(B)^(dA-dB+1) A mod B`` and that exponent."""
    db = max(B)
    lb = B[db]
    R = dict(A)
    e = max(A) - db + 1
    k = e
    while R and max(R) >= db:
        dr = max(R)
        lr = R[dr]
        out = {d: _cmul(a, lb) for d, a in R.items()}
        for d, b in B.items():
            out[d + dr - db] = _csub(out.get(d + dr - db, {}), _cmul(lr, b))
        R = {d: a for d, a in out.items() if a}
        k -= 1
    if k > 0 and R:
        R = _pmul(R, _cpow(lb, k, {tuple(0 for _ in next(iter(lb))): 1}))
    return R, e


def _to_int(P: MultiPoly, i: int):
    den = 1
    for c in P.terms.values():
        den = den * c.denominator // igcd(den, c.denominator)
    out: dict = {}
    for e, c in P.terms.items():
        out.setdefault(e[i], {})[e[:i] + e[i + 1:]] = int(c * den)
    return out, den


def _from_int(P: dict, i: int, vars, scale: Fraction) -> MultiPoly:
    terms = {}
    for d, a in P.items():
        for e, c in a.items():
            terms[e[:i] + (d,) + e[i:]] = Fraction(c) * scale
    return MultiPoly(vars, terms, QQ)


def _coeff_poly(a: dict, rest, scale: Fraction) -> MultiPoly:
    return MultiPoly(rest, {e: Fraction(c) * scale for e, c in a.items()}, QQ)


def signed_subresultants(P: MultiPoly, Q: MultiPoly, var=U0) -> SubresultantSequence:
    """Signed subresultant sequence of P and Q in ``var``, over Q[other variables].

    Runs the fraction-free recurrence on integer coefficients: every division
    is exact, and defective gaps are filled from the structure theorem.  The
    inputs are scaled to integers first and the scaling is divided out at the
    end (sRes_j is homogeneous of degree q-j in P and p-j in Q).
    """
    if P.vars != Q.vars:
        raise StructureError(f"ring mismatch: {P.vars} vs {Q.vars}")
    if P.domain != QQ or Q.domain != QQ:
        raise StructureError("subresultants are computed over Q[parameters]")
    i = P._index(var)
    p, q = P.degree(i), Q.degree(i)
    if Q.is_zero() or p <= q:
        raise StructureError("need deg P > deg Q >= 0")
    rest = P.vars[:i] + P.vars[i + 1:]
    Pi, a = _to_int(P, i)
    Qi, b = _to_int(Q, i)
    unit = {(0,) * len(rest): 1}
    S = {p: Pi, p - 1: Qi}
    s = {p: unit}
    tt = {p: unit, p - 1: Qi[q]}
    ii, j = p + 1, p
    while j >= 1 and S.get(j - 1):
        k = max(S[j - 1])
        if k == j - 1:
            s[j - 1] = tt[j - 1]
            mult = _cmul(s[j - 1], s[j - 1])
        else:
            s[j - 1] = {}
            for d in range(1, j - k):
                v = _cdiv(_cmul(tt[j - 1], tt[j - d]), s[j])
                tt[j - d - 1] = v if d % 2 == 0 else {e: -c for e, c in v.items()}
            s[k] = tt[k]
            S[k] = _pdiv(_pmul(S[j - 1], s[k]), tt[j - 1])
            mult = _cmul(tt[j - 1], s[k])
        if k == 0:
            ii, j = j, k
            break
        R, e = _prem(_pmul(S[ii - 1], mult), S[j - 1])
        den = _cmul(_cpow(S[j - 1][k], e, unit), _cmul(s[j], tt[ii - 1]))
        nxt = {d: {x: -c for x, c in _cdiv(v, den).items()} for d, v in R.items()}
        S[k - 1] = nxt
        tt[k - 1] = nxt[max(nxt)] if nxt else {}
        ii, j = j, k
    polys, pcs = [], []
    for ell in range(p, -1, -1):
        if ell == p:
            polys.append(P)
            pcs.append(_coeff_poly(Pi[p], rest, Fraction(1, a)))
            continue
        # undo the integer scaling: a^(q-ell) b^(p-ell)
        scale = Fraction(1, a ** max(q - ell, 0) * b ** (p - ell))
        polys.append(_from_int(S.get(ell, {}), i, P.vars, scale))
        if ell == p - 1:
            pcs.append(_coeff_poly(Qi.get(p - 1, {}), rest, scale))
        else:
            pcs.append(_coeff_poly(s.get(ell, {}), rest, scale))
    return SubresultantSequence(P.vars[i], polys, pcs)


def sturm_habicht(P: MultiPoly, var=U0) -> SubresultantSequence:
    return signed_subresultants(P, P.derivative(var), var)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def pmv(signs: Sequence[int]) -> int:
    """Generalized permanences minus variations of a sign list (first entry nonzero)."""
    seq = list(signs)
    if not seq or seq[0] == 0:
        raise ValueError("sequence must start with a nonzero entry")
    total = 0
    i = 0
    while True:
        j = next((k for k in range(i + 1, len(seq)) if seq[k]), None)
        if j is None:
            return total
        gap = j - i
        if gap % 2 == 1:
            eps = -1 if (gap * (gap - 1) // 2) % 2 else 1
            total += eps * seq[i] * seq[j]
        i = j


def count_real_roots(p: MultiPoly) -> int:
    """Number of distinct real roots of a univariate polynomial over Q."""
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    if len(p.vars) != 1:
        raise StructureError("count_real_roots needs a univariate polynomial")
    if p.degree() == 0:
        return 0
    sh = sturm_habicht(p, p.vars[0])
    return pmv([_sign(c.constant_value()) for c in sh.principal_coeffs])


# ------------------------------------------------------------ classification

@dataclass
class ClassifyConfig:
    """Sample grid: every multiple of ``1/denominator`` in [-radius, radius]^s."""

    radius: int = 4
    denominator: int = 2
    pipeline: str = "la"
    max_enlargements: int = 1


@dataclass
class ClassificationResult:
    formulas: list
    samples: list  # (point, sign vector, count)
    excluded_certificates: list
    delta: MultiPoly
    grur: GRUR | None = field(default=None, repr=False)

    @property
    def cells(self) -> dict:
        out: dict = {}
        for _, signs, count in self.samples:
            out.setdefault(signs, set()).add(count)
        return {k: (min(v) if len(v) == 1 else sorted(v)) for k, v in out.items()}

    def is_consistent(self) -> bool:
        return all(not isinstance(v, list) for v in self.cells.values())


def clear_h0(g: GRUR) -> MultiPoly:
    """h0 times the lcm of its coefficient denominators, as a polynomial in (U0, W)."""
    return _clear(g.h0)


def _clear(h: MultiPoly) -> MultiPoly:
    if not isinstance(h.domain, RatFuncField):
        return h
    params = h.domain.params
    L = denominator_lcm(h)
    out = {}
    for (k,), c in h.terms.items():
        num = (c * L).num if not c.is_polynomial() else c.num * L
        for e, a in num.terms.items():
            out[(k,) + e] = a
    return MultiPoly((U0,) + params, out, QQ)


def _positive_scaled(p: MultiPoly) -> MultiPoly:
    return p * (1 / p.content())


def _sample_points(s: int, radius: int, den: int):
    vals = [Fraction(k, den) for k in range(-radius * den, radius * den + 1)]
    return itertools.product(vals, repeat=s)


def classify_real_roots(system: Sequence[MultiPoly], seed=0, config: ClassifyConfig | None = None,
                        grur: GRUR | None = None) -> ClassificationResult:
    """Split parameter space by the signs of the Sturm-Habicht principal coefficients.

    The sign conditions are sampled on a rational grid rather than one point
    per connected component, so cells missed by the grid are not reported.
    """
    config = config or ClassifyConfig()
    if grur is None:
        if config.pipeline == "ei":
            from .grur_ei import grur_ei
            grur = grur_ei(system, seed)
        else:
            grur = grur_la(system, seed)
    params = grur.params
    delta = clear_h0(grur)
    sh = sturm_habicht(delta, U0)
    formulas, seen = [], set()
    for c in sh.principal_coeffs:
        if c.is_zero() or c.is_constant():
            continue
        key = _positive_scaled(c)
        if key not in seen:
            seen.add(key)
            formulas.append(c)
    lcU = delta.coeffs_in(0)[delta.degree(0)]
    excluded = []
    for c in [lcU, *grur.certificates]:
        c = c.change_ring(params) if c.vars != params else c
        if not c.is_constant():
            excluded.append(c)
    if params and grur.h0.degree() > 1:
        sf = squarefree_part(grur.h0)
        if sf.degree() > 1:
            # the discriminant, up to a constant, is the last principal coefficient
            d = sh.principal(0) if sf == grur.h0 else sturm_habicht(_clear(sf), U0).principal(0)
            if not d.is_constant():
                excluded.append(d)
    guards = formulas + excluded
    if not params:
        signs = ()
        samples = [((), signs, count_real_roots(delta.change_ring((U0,))))]
        return ClassificationResult(formulas, samples, excluded, delta, grur)
    radius = config.radius
    for _ in range(config.max_enlargements + 1):
        samples = []
        for w in _sample_points(len(params), radius, config.denominator):
            pt = dict(zip(params, w))
            if any(c.evaluate(pt) == 0 for c in guards):
                continue
            signs = tuple(_sign(c.evaluate(pt)) for c in formulas)
            dw = delta.evaluate_partial(pt)
            samples.append((w, signs, count_real_roots(dw)))
        if samples:
            return ClassificationResult(formulas, samples, excluded, delta, grur)
        radius *= 2
    raise EmptySampleSet("every sample point lies on an excluded hypersurface")

import random
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st

from grur.errors import StructureError
from grur.parser import parse_parampoly, parse_poly
from grur.poly import MultiPoly, QQ
from grur.realroots import (classify_real_roots, count_real_roots, pmv, signed_subresultants,
                            sturm_habicht)
from grur.rur import U0

from corpus import FIXTURES
from oracles import numeric_roots, subresultant_principal_by_definition, to_sympy

WU = ("W", U0)


def P(text, vars=WU):
    return parse_poly(text, (), vars)


def Uq(text):
    return parse_poly(text, (), (U0,))


def test_sres_example():
    sr = signed_subresultants(P("U0^2 - W"), P("2*U0"), U0)
    assert sr.principal_coeffs == [P("1", ("W",)), P("2", ("W",)), P("4*W", ("W",))]
    assert sr.sres(2) == P("U0^2 - W") and sr.sres(1) == P("2*U0")
    assert sr.sres(0) == P("4*W")


def test_sres_linear():
    V = ("a", U0)
    sr = signed_subresultants(P("U0 - a", V), P("1", V), U0)
    assert sr.polys == [P("U0 - a", V), P("1", V)]
    assert sr.principal_coeffs == [P("1", ("a",)), P("1", ("a",))]


def test_sres_preconditions():
    with pytest.raises(StructureError):
        signed_subresultants(P("U0"), P("U0^2"), U0)


def test_sres_specialization_example():
    delta = P("U0^2 - W")
    lhs = [p.evaluate_partial({"W": 3}) for p in sturm_habicht(delta, U0).polys]
    rhs = sturm_habicht(Uq("U0^2 - 3"), U0).polys
    assert lhs == rhs


univ = st.lists(st.integers(-6, 6), min_size=2, max_size=8).filter(lambda c: c[-1] != 0)


def _u(cs):
    return MultiPoly.from_dense([Fraction(c) for c in cs], U0, QQ)


@given(univ, univ)
def test_sres_matches_determinant_definition(a, b):
    p, q = _u(a), _u(b)
    if p.degree() <= q.degree():
        p, q = q, p
    if p.degree() == q.degree():
        q = p.derivative(0)
    if q.is_zero():
        return
    mine = signed_subresultants(p, q, U0)
    x = sympy.Symbol(U0)
    ref = subresultant_principal_by_definition(to_sympy(p), to_sympy(q), x)
    assert [sympy.Rational(c.constant_value().numerator, c.constant_value().denominator)
            for c in mine.principal_coeffs] == ref


def test_parametric_sres_matches_definition():
    rng = random.Random(8)
    W, x = sympy.symbols("W U0")
    for _ in range(10):
        d = rng.randint(2, 5)
        terms = [f"({rng.randint(-3, 3)}*W + {rng.randint(-3, 3)})*U0^{k}" for k in range(d)]
        delta = P(f"U0^{d} + " + " + ".join(terms))
        mine = sturm_habicht(delta, U0).principal_coeffs
        ref = subresultant_principal_by_definition(to_sympy(delta), sympy.diff(to_sympy(delta), x), x)
        assert [sympy.expand(to_sympy(c, ("W",))) for c in mine] == [sympy.expand(r) for r in ref]


# ------------------------------------------------------------ counting

def test_pmv_examples():
    assert pmv([1, 1, 1]) == 2
    assert pmv([1, -1]) == -1
    assert pmv([1, 0, 1]) == 0
    assert pmv([1, 0, 0, 1]) == -1
    with pytest.raises(ValueError):
        pmv([0, 1])


def test_count_examples():
    assert count_real_roots(Uq("U0^2 - 1")) == 2
    assert count_real_roots(Uq("U0^2 + 1")) == 0
    assert count_real_roots(Uq("(U0 - 1)^2*(U0^2 + 1)")) == 1
    assert count_real_roots(Uq("5")) == 0
    with pytest.raises(ValueError):
        count_real_roots(Uq("0"))


def _numeric_distinct_real(cs):
    roots = numeric_roots(cs[::-1])
    real = [mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf("1e-9")]
    out = []
    for r in sorted(real):
        if not out or abs(r - out[-1]) > mpmath.mpf("1e-9"):
            out.append(r)
    return len(out)


def test_count_matches_numeric_on_random_polynomials():
    rng = random.Random(2024)
    for _ in range(100):
        d = rng.randint(1, 8)
        cs = [rng.randint(-10, 10) for _ in range(d)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
        if rng.random() < 0.3:
            # force a repeated root
            r = rng.randint(-3, 3)
            p = _u(cs) * _u([-r, 1]) ** 2
        else:
            p = _u(cs)
        # exact squarefree part keeps the numeric clustering honest for multiple roots
        sf = sympy.Poly(sympy.sqf_part(to_sympy(p)), sympy.Symbol(U0))
        ref = _numeric_distinct_real([sympy.Rational(c) for c in sf.all_coeffs()][::-1])
        assert count_real_roots(p) == ref


# ------------------------------------------------------------ classification

def test_classify_sqrt():
    res = classify_real_roots(FIXTURES["sqrt"].parametric())
    assert len(res.formulas) == 1
    f = res.formulas[0]
    assert f == parse_poly("4*W1", (), ("W1",))
    assert res.is_consistent()
    assert res.cells == {(1,): 2, (-1,): 0}


def test_classify_line_parabola():
    res = classify_real_roots(FIXTURES["line_parabola"].parametric())
    assert res.cells == {(1,): 2, (-1,): 0}


def test_classify_double_root():
    res = classify_real_roots(FIXTURES["double_root"].parametric())
    assert res.is_consistent()
    assert set(res.cells.values()) == {1}


def test_classify_two_parameters():
    F = [parse_parampoly("X1^2 - W1*W2", ("W1", "W2"), ("X1",))]
    res = classify_real_roots(F)
    assert res.is_consistent()
    for w, signs, count in res.samples:
        assert count == (2 if w[0] * w[1] > 0 else 0)


def test_classify_non_parametric():
    res = classify_real_roots([parse_poly("X1^3 - X1", (), ("X1",))])
    assert res.samples == [((), (), 3)]


@given(univ, univ)
def test_sres_sequence_invariants(a, b):
    p = _u(a) * _u(b)
    if p.degree() < 1:
        return
    sr = sturm_habicht(p, U0)
    assert sr.sres(p.degree()) == p and sr.sres(p.degree() - 1) == p.derivative(0)
    for j in range(p.degree() + 1):
        s = sr.sres(j)
        assert s.is_zero() or s.degree() <= j
        lead = s.coeffs_in(0).get(j)
        assert (lead.constant_value() if lead is not None else 0) == sr.principal(j).constant_value()

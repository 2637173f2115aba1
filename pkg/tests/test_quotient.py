import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from grur.errors import NotZeroDimensional, StructureError
from grur.groebner import GroebnerBasis, buchberger
from grur.parser import parse_parampoly, parse_poly
from grur.poly import QQ, MultiPoly, grevlex
from grur.quotient import (build_quotient, hermite_matrix, mat_mul,
                           quotient_basis, rank, specialize_matrix, trace_of)
from grur.ratfunc import RatFunc, parampoly_specialize
from grur.rur import good_specialization

from corpus import FIXTURES, random_corpus
from oracles import eval_poly_mp, solve_numeric

X = ("X1", "X2")
PW = ("W",)


def PP(*texts, vars=X):
    return [parse_parampoly(t, PW, vars) for t in texts]


def W(text):
    return RatFunc(parse_poly(text, (), PW))


def _lm_basis(lms):
    els = [MultiPoly(X, {lm: Fraction(1)}, QQ) for lm in lms]
    return GroebnerBasis(tuple(els), grevlex(2), X, QQ)


def test_quotient_basis_examples():
    # mirrored to X1 > X2: LMs {X1, X2^2} leave 1, X2
    assert quotient_basis(_lm_basis([(1, 0), (0, 2)])) == [(0, 0), (0, 1)]
    assert quotient_basis(_lm_basis([(2, 0), (0, 2), (1, 1)])) == [(0, 0), (0, 1), (1, 0)]
    assert quotient_basis(buchberger([parse_poly("1", (), X)], grevlex(2))) == []


def test_quotient_basis_positive_dimensional():
    with pytest.raises(NotZeroDimensional):
        quotient_basis(_lm_basis([(1, 1)]))


def test_line_parabola_structure():
    qs = build_quotient(buchberger(PP("X2 - X1", "X1^2 - W"), grevlex(2)))
    zero, one, w = W("0"), W("1"), W("W")
    assert qs.basis_monomials == [(0, 0), (0, 1)]
    assert qs.mult_matrices[0] == [[zero, w], [one, zero]]
    assert qs.mult_matrices[1] == qs.mult_matrices[0]
    assert qs.mult_tensor[1][1] == [w, zero]
    assert qs.traces == [W("2"), zero]
    assert hermite_matrix(qs) == [[W("2"), zero], [zero, W("2*W")]]
    assert rank(specialize_matrix(hermite_matrix(qs), {"W": 1})) == 2


def test_double_root_structure():
    qs = build_quotient(buchberger(PP("(X1 - W)^2", vars=("X1",)), grevlex(1)))
    assert qs.traces == [W("2"), W("2*W")]
    H = hermite_matrix(qs)
    assert H == [[W("2"), W("2*W")], [W("2*W"), W("2*W^2")]]
    assert rank(H) == 1


def test_single_point():
    qs = build_quotient(buchberger([parse_poly("X1 - 3", (), ("X1",))], grevlex(1)))
    assert qs.mult_matrices == [[[Fraction(3)]]]


def test_tensor_identity_and_symmetry():
    qs = build_quotient(buchberger(PP("X1^2 - W", "X2^2 - W"), grevlex(2)))
    D = qs.D
    for j in range(D):
        e = [W("0")] * D
        e[j] = W("1")
        assert qs.mult_tensor[0][j] == e
        for i in range(D):
            assert qs.mult_tensor[i][j] == qs.mult_tensor[j][i]
    assert qs.traces[0] == W(str(D))


def test_trace_of():
    qs = build_quotient(buchberger(PP("X2 - X1", "X1^2 - W"), grevlex(2)))
    assert trace_of([W("1"), W("0")], qs) == W("2")
    assert trace_of(qs.coordinates(PP("X1")[0]), qs) == W("0")
    with pytest.raises(StructureError):
        trace_of([W("1")], qs)


@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_trace_is_linear(c):
    qs = build_quotient(buchberger(PP("X1^2 - W", "X2^2 - W"), grevlex(2)))
    u = [W(str(c[0])), W("W"), W("0"), W(str(c[1]))]
    v = [W("1"), W(str(c[2])), W("W^2"), W("0")]
    a, b = W(str(c[3])), W("W + 1")
    comb = [a * x + b * y for x, y in zip(u, v)]
    assert trace_of(comb, qs) == a * trace_of(u, qs) + b * trace_of(v, qs)


def _small_corpus():
    return list(FIXTURES.values()) + [c for c in random_corpus() if c.name.startswith(
        ("rand0", "rand1"))][:14]


def test_matrices_commute_on_corpus():
    for sysm in _small_corpus():
        F = sysm.parametric()
        qs = build_quotient(buchberger(F, grevlex(len(sysm.vars))))
        M = qs.mult_matrices
        for i in range(len(M)):
            for j in range(i + 1, len(M)):
                assert mat_mul(M[i], M[j]) == mat_mul(M[j], M[i]), sysm.name


def test_columns_are_normal_forms():
    sysm = FIXTURES["two_squares"]
    G = buchberger(sysm.parametric(), grevlex(2))
    qs = build_quotient(G)
    for i, v in enumerate(sysm.vars):
        xi = MultiPoly.var(v, sysm.vars, G.domain)
        for j, m in enumerate(qs.basis_monomials):
            pj = MultiPoly(sysm.vars, {m: G.domain.one}, G.domain)
            col = [row[j] for row in qs.mult_matrices[i]]
            assert col == qs.coordinates(G.normal_form(xi * pj))


def _good_points(sysm, G, count, rng):
    out = []
    tries = 0
    while len(out) < count and tries < 200:
        tries += 1
        w = {p: Fraction(rng.randint(-9, 9)) for p in sysm.params}
        Gw = good_specialization(sysm.parametric(), G, w)
        if Gw is not None:
            out.append((w, Gw))
    return out


def test_specialization_of_quotient_structure():
    rng = random.Random(11)
    for sysm in _small_corpus():
        G = buchberger(sysm.parametric(), grevlex(len(sysm.vars)))
        qs = build_quotient(G)
        for w, Gw in _good_points(sysm, G, 3, rng):
            qw = build_quotient(Gw)
            # common basis
            assert qw.basis_monomials == qs.basis_monomials, sysm.name
            for Mi, Mw in zip(qs.mult_matrices, qw.mult_matrices):
                assert specialize_matrix(Mi, w) == Mw
            # coordinates of a random element specialize entry-wise
            vp = sum((MultiPoly.var(x, sysm.vars, G.domain) ** rng.randint(1, 4) for x in sysm.vars),
                     MultiPoly.constant(rng.randint(-3, 3), sysm.vars, G.domain))
            cw = [c.evaluate(w) for c in qs.coordinates(vp)]
            assert cw == qw.coordinates(parampoly_specialize(vp, w))


def test_stickelberger_traces():
    rng = random.Random(3)
    checked = 0
    for sysm in _small_corpus():
        G = buchberger(sysm.parametric(), grevlex(len(sysm.vars)))
        for w, Gw in _good_points(sysm, G, 2, rng):
            qw = build_quotient(Gw)
            pts = solve_numeric(list(Gw.elements), sysm.vars)
            if len(pts) != qw.D:
                continue  # multiplicities unknown to the oracle
            for i, m in enumerate(qw.basis_monomials):
                pi = MultiPoly(sysm.vars, {m: Fraction(1)}, QQ)
                approx = mpmath.fsum(eval_poly_mp(pi, p) for p in pts)
                exact = qw.traces[i]
                assert abs(approx - mpmath.mpf(exact.numerator) / exact.denominator) < mpmath.mpf("1e-9") * max(
                    1, abs(exact))
            checked += 1
    assert checked >= 10

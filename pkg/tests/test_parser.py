import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from grur.parser import ParseError, load_system, parse_parampoly, parse_poly, tokenize
from grur.poly import MultiPoly

from corpus import FIXTURES, random_corpus

V = ("W1", "X1")


def test_examples():
    assert parse_poly("X1^2 - W1", (), V) == MultiPoly(V, {(0, 2): 1, (1, 0): -1})
    assert parse_poly("(X1 - W1)^2", (), V) == parse_poly("X1^2 - 2*W1*X1 + W1^2", (), V)
    assert parse_poly("1/2*X1 + 3", (), V) == MultiPoly(V, {(0, 1): Fraction(1, 2), (0, 0): 3})


def test_precedence():
    # ^ binds tighter than unary minus
    assert parse_poly("-X1^2", (), V) == MultiPoly(V, {(0, 2): -1})
    assert parse_poly("2*X1^2", (), V) == MultiPoly(V, {(0, 2): 2})
    assert parse_poly("1 - X1 - 1", (), V) == MultiPoly(V, {(0, 1): -1})
    assert parse_poly("X1/2/2", (), V) == MultiPoly(V, {(0, 1): Fraction(1, 4)})


@pytest.mark.parametrize("text,col", [
    ("2X1", 2), ("X1 +", 5), ("X1^-1", 4), ("Y1", 1), ("X1 $ 2", 4), ("(X1", 4), ("X1/X1", 3), ("X1/0", 3),
])
def test_errors_carry_position(text, col):
    with pytest.raises(ParseError) as e:
        parse_poly(text, (), V)
    assert e.value.line == 1 and e.value.column == col


def test_multiline_position():
    with pytest.raises(ParseError) as e:
        parse_poly("X1 +\n  Z", (), V)
    assert (e.value.line, e.value.column) == (2, 3)


def test_tokenize():
    kinds = [t.kind for t in tokenize("3*X1^2")]
    assert kinds == ["int", "op", "ident", "op", "int", "end"]


def test_load_system_validation():
    good = {"params": ["W1"], "vars": ["X1"], "polys": ["X1^2 - W1"]}
    assert load_system(good).polys == ["X1^2 - W1"]
    assert load_system(json.dumps(good)).vars == ["X1"]
    for bad in [
        {"params": ["W1"], "vars": ["X1"], "polys": []},
        {"params": ["W1"], "vars": ["W1"], "polys": ["W1"]},
        {"params": ["1W"], "vars": ["X1"], "polys": ["X1"]},
        {"params": [], "vars": ["U0"], "polys": ["U0"]},
        {"params": [], "vars": ["X1"], "polys": ["X2"]},
        {"vars": ["X1"], "polys": ["X1"]},
    ]:
        with pytest.raises(ParseError):
            load_system(bad)
    with pytest.raises(ParseError):
        load_system("{not json")


def test_corpus_round_trip():
    for sysm in list(FIXTURES.values()) + list(random_corpus()):
        names = sysm.params + sysm.vars
        for text in sysm.polys:
            p = parse_poly(text, (), names)
            assert parse_poly(str(p), (), names) == p
            q = parse_parampoly(text, sysm.params, sysm.vars)
            assert parse_parampoly(str(p), sysm.params, sysm.vars) == q


@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)),
                       st.fractions(min_value=-20, max_value=20, max_denominator=9), max_size=6))
def test_display_round_trip(terms):
    p = MultiPoly(V, {e: c for e, c in terms.items() if c})
    assert parse_poly(str(p), (), V) == p

"""Acceptance suite: one test per criterion, each reported in the run summary.

Run alone with ``pytest tests/test_acceptance.py -v``; the verdict lines are
printed in the "acceptance criteria" section at the end of the run.
"""
import os
import random
import subprocess
import sys
import time
from fractions import Fraction
from functools import lru_cache

import mpmath

from grur.errors import FormSearchFailed, InsufficientGoodPoints
from grur.grur_ei import degree_bounds, grur_ei
from grur.parser import parse_parampoly, parse_poly
from grur.poly import MultiPoly, divexact, grevlex, squarefree_factorization, univ_gcd
from grur.ratfunc import parampoly_specialize
from grur.realroots import classify_real_roots, sturm_habicht
from grur.rur import (U0, LinearForm, candidate_forms, good_specialization, groebner_and_quotient,
                      grur_la, is_generically_separating, specialize_grur)
from grur.groebner import buchberger

from conftest import la_result
from corpus import FIXTURES, random_corpus
from oracles import charpoly_by_det, count_real_points, eval_poly_mp, same_univariate, solve_numeric
from report import criterion

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
TOL = mpmath.mpf("1e-9")


def _all_systems():
    return list(FIXTURES.values()) + list(random_corpus())


def U(text, params=("W1",)):
    return parse_parampoly(text, params, (U0,))


def _mp(c):
    return mpmath.mpf(c.numerator) / c.denominator


def _polyval(p: MultiPoly, y):
    cs = p.to_dense() or [Fraction(0)]
    return mpmath.polyval([_mp(c) for c in cs[::-1]], y)


def _roots(p: MultiPoly):
    cs = [_mp(c) for c in p.to_dense()[::-1]]
    if len(cs) == 2:
        return [-cs[1] / cs[0]]
    return mpmath.polyroots(cs, maxsteps=500, extraprec=600)


# ------------------------------------------------------------ 1

def test_c01_worked_fixtures():
    with criterion(1, "worked fixtures reproduced exactly by both pipelines, < 10 s each"):
        expected = {
            "line_parabola": (LinearForm((1, 0)), U("U0^2 - W1"), U("2*U0"), [U("2*W1"), U("2*W1")]),
            "double_root": (LinearForm((1,)), U("(U0 - W1)^2"), U("2*(U0 - W1)"), [U("2*W1*(U0 - W1)")]),
            "two_squares": (LinearForm((1, 2)), U("U0^4 - 10*W1*U0^2 + 9*W1^2"), None, None),
        }
        for name, (t, h0, h1, hX) in expected.items():
            F = FIXTURES[name].parametric()
            for pipeline in (grur_la, grur_ei):
                start = time.perf_counter()
                g = pipeline(F, 0)
                elapsed = time.perf_counter() - start
                assert elapsed < 10, (name, pipeline.__name__, elapsed)
                assert g.t == t and g.h0 == h0, (name, pipeline.__name__)
                assert g.h1 == (h1 if h1 is not None else h0.derivative(0))
                if hX is not None:
                    assert g.hX == hX, (name, pipeline.__name__)


# ------------------------------------------------------------ 2 and 7

@lru_cache(maxsize=None)
def _pipelines():
    """Both pipelines on the random corpus, timed; EI failures are kept, not raised."""
    out = {}
    for sysm in random_corpus():
        F = sysm.parametric()
        t0 = time.perf_counter()
        la = grur_la(F, 0)
        t1 = time.perf_counter()
        try:
            ei, err = grur_ei(F, 0), None
        except Exception as exc:  # recorded and asserted on by the callers
            ei, err = None, exc
        t2 = time.perf_counter()
        out[sysm.name] = (la, ei, err, t1 - t0, t2 - t1)
    return out


def _shape_ok(sysm):
    names = sysm.params + sysm.vars
    s, n = len(sysm.params), len(sysm.vars)
    if not (n <= 3 and s <= 2):
        return False
    for text in sysm.polys:
        p = parse_poly(text, (), names)
        for e, c in p.terms.items():
            if c.denominator != 1 or not -5 <= c <= 5:
                return False
            if sum(e[s:]) > 3 or sum(e[:s]) > 2:
                return False
    return True


def test_c02_pipeline_equivalence():
    with criterion(2, "LA and EI agree on >= 20 random systems, < 5 min total"):
        corpus = random_corpus()
        assert len(corpus) >= 20
        assert all(_shape_ok(c) for c in corpus)
        results = _pipelines()
        total = 0.0
        for name, (la, ei, err, t_la, t_ei) in results.items():
            assert err is None, (name, err)
            assert la == ei, name
            total += t_la + t_ei
        assert total < 300, total


# ------------------------------------------------------------ 3 and 4

def _draw_point(rng, params):
    return {p: Fraction(rng.randint(-30, 30)) for p in params}


@lru_cache(maxsize=None)
def _good_specializations(per_system=10):
    """(system, w, specialized GRUR, direct RUR) for random good points of every system."""
    rng = random.Random(31)
    out = []
    for sysm in _all_systems():
        g = la_result(sysm.name)
        F = sysm.parametric()
        G = buchberger(F, grevlex(len(sysm.vars)))
        found, tries = 0, 0
        while found < per_system and tries < 300:
            tries += 1
            w = _draw_point(rng, sysm.params)
            if any(c.evaluate(w) == 0 for c in g.certificates):
                continue
            Gw = good_specialization(F, G, w)
            if Gw is None:
                continue
            try:
                direct = grur_la([parampoly_specialize(f, w) for f in F], forms=[g.t])
            except FormSearchFailed:
                continue  # t does not separate at w: w is not a good point
            out.append((sysm, w, specialize_grur(g, w), direct))
            found += 1
        assert found == per_system, (sysm.name, found)
    return out


def test_c03_specialization_commutes():
    with criterion(3, "specialized GRUR equals the RUR of the specialized system (10 good w each)"):
        cases = _good_specializations()
        assert len(cases) == 10 * len(_all_systems())
        for sysm, w, sg, direct in cases:
            assert sg == direct, (sysm.name, w)


def test_c04_numeric_oracle():
    with criterion(4, "specialized RURs parametrize the numeric solutions, multiplicities sum to D"):
        for sysm, w, sg, _ in _good_specializations():
            F = [parampoly_specialize(f, w) for f in sysm.parametric()]
            h0, h1 = sg.h0, sg.h1
            g = univ_gcd(h0, h1)
            red = divexact(h0, g)
            num = [divexact(h, g) for h in sg.hX]
            den = divexact(h1, g)
            mult = {}
            for fac, k in squarefree_factorization(h0):
                for y in _roots(fac):
                    mult[y] = k
            assert len(mult) == red.degree()
            assert sum(fac.degree() * k for fac, k in squarefree_factorization(h0)) == sg.D
            all_roots = _roots(h0)
            total = 0
            for y in _roots(red):
                pt = [_polyval(h, y) / _polyval(den, y) for h in num]
                for f in F:
                    assert abs(eval_poly_mp(f, pt)) < TOL, (sysm.name, w)
                assert abs(sg.t.value(pt) - y) < TOL * max(1, abs(y))
                k = next(m for r, m in mult.items() if abs(r - y) < mpmath.mpf("1e-30") * max(1, abs(y)))
                near = sum(1 for r in all_roots if abs(r - y) < mpmath.mpf("1e-8") * max(1, abs(y)))
                assert near == k, (sysm.name, w, k, near)
                total += k
            assert total == sg.D
            assert len(solve_numeric(F, sysm.vars)) == red.degree(), (sysm.name, w)


# ------------------------------------------------------------ 5

def test_c05_newton_identities():
    with criterion(5, "characteristic polynomial from traces equals det(U0 I - M_t) for D <= 6"):
        checked = 0
        for sysm in _all_systems():
            g = la_result(sysm.name)
            if g.D > 6:
                continue
            _, qs = groebner_and_quotient(sysm.parametric())
            ref = charpoly_by_det(g.t.matrix(qs), sysm.params)
            assert same_univariate(g.h0, ref, sysm.params), sysm.name
            checked += 1
        assert checked >= 20


# ------------------------------------------------------------ 6

def _injective_numerically(F, vars, t, w):
    Fw = [parampoly_specialize(f, w) for f in F]
    pts = solve_numeric(Fw, vars)
    vals = [t.value(p) for p in pts]
    for i in range(len(vals)):
        for j in range(i):
            if abs(vals[i] - vals[j]) < mpmath.mpf("1e-8") * max(1, abs(vals[i])):
                return False
    return True


def _separation_cases():
    for sysm in _all_systems():
        g = la_result(sysm.name)
        F = sysm.parametric()
        _, qs = groebner_and_quotient(F)
        forms = []
        for t in candidate_forms(qs.n, qs.D):
            forms.append(t)
            if t == g.t:
                break
        yield sysm.name, F, sysm.params, sysm.vars, qs, forms
        if g.D <= 6:
            # a fresh variable with two values doubles every point; t ignores it
            extra = f"X{len(sysm.vars) + 1}"
            vars = sysm.vars + (extra,)
            F2 = [parse_parampoly(p, sysm.params, vars) for p in sysm.polys + (f"{extra}^2 - 1",)]
            _, qs2 = groebner_and_quotient(F2)
            yield sysm.name + "+double", F2, sysm.params, vars, qs2, [
                LinearForm(g.t.coeffs + (0,)), LinearForm(g.t.coeffs + (1,))]


def test_c06_separation_criterion():
    with criterion(6, "separation verdicts agree with numeric injectivity at the witness"):
        seen = {True: 0, False: 0}
        for name, F, params, vars, qs, forms in _separation_cases():
            for k, t in enumerate(forms):
                v = is_generically_separating(qs, t, k, system=F)
                w = dict(zip(params, v.witness))
                assert bool(v) == _injective_numerically(F, vars, t, w), (name, t)
                seen[bool(v)] += 1
        assert seen[True] >= 20 and seen[False] >= 10, seen


# ------------------------------------------------------------ 7

def test_c07_grid_sufficiency():
    with criterion(7, "grid inequality over the tested range; no InsufficientGoodPoints on the corpus"):
        for n in (1, 2, 3):
            for s in (1, 2):
                for dX in (1, 2, 3):
                    for dW in (1, 2):
                        b = degree_bounds(n, s, dX, dW)
                        assert b.k0 ** s - b.q * b.k0 ** (s - 1) >= (b.kappa + 1) ** s, (n, s, dX, dW)
                        assert b.grid_is_sufficient()
        for name, (_, _, err, _, _) in _pipelines().items():
            assert not isinstance(err, InsufficientGoodPoints), name


# ------------------------------------------------------------ 8

def test_c08_real_root_classification():
    with criterion(8, "sqrt cells exact; sampled counts match numeric real-root counts"):
        res = classify_real_roots(FIXTURES["sqrt"].parametric())
        assert res.cells == {(1,): 2, (-1,): 0}
        assert [str(f) for f in res.formulas] == ["4*W1"]
        rng = random.Random(5)
        for sysm in _all_systems():
            F = sysm.parametric()
            res = classify_real_roots(F, grur=la_result(sysm.name))
            assert res.is_consistent(), sysm.name
            samples = rng.sample(res.samples, min(10, len(res.samples)))
            assert len(samples) == 10
            for w, _, count in samples:
                pt = dict(zip(sysm.params, w))
                pts = solve_numeric([parampoly_specialize(f, pt) for f in F], sysm.vars)
                assert count_real_points(pts) == count, (sysm.name, w)


# ------------------------------------------------------------ 9

def _random_delta(rng, params):
    d = rng.randint(2, 6)
    names = params + (U0,)
    terms = []
    for k in range(d + 1):
        if k < d and rng.random() < 0.3:
            continue
        c = " + ".join(f"({rng.randint(-5, 5)})*{p}^{rng.randint(0, 2)}" for p in params)
        terms.append(f"({c} + {rng.choice([-3, -1, 1, 2, 4])})*U0^{k}")
    p = parse_poly(" + ".join(terms), (), names)
    return p if p.degree(len(params)) == d else None


def test_c09_subresultant_specialization():
    with criterion(9, "specializing commutes with the Sturm-Habicht sequence on 50 random pairs"):
        rng = random.Random(99)
        done = 0
        while done < 50:
            params = ("W1",) if rng.random() < 0.6 else ("W1", "W2")
            delta = _random_delta(rng, params)
            if delta is None:
                continue
            w = {p: Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for p in params}
            lc = delta.coeffs_in(U0)[delta.degree(len(params))]
            if lc.evaluate(w) == 0:
                continue
            sh = sturm_habicht(delta, U0)
            lhs = [p.evaluate_partial(w) for p in sh.polys]
            rhs = sturm_habicht(delta.evaluate_partial(w), U0)
            assert lhs == rhs.polys, (str(delta), w)
            assert [c.evaluate(w) for c in sh.principal_coeffs] == [c.constant_value() for c in rhs.principal_coeffs]
            done += 1


# ------------------------------------------------------------ 10

def test_c10_cli_determinism(tmp_path):
    with criterion(10, "every CLI command gives byte-identical output across runs with the same seed"):
        outs = []
        for hashseed in ("0", "4242"):
            path = tmp_path / f"run{hashseed}.txt"
            env = dict(os.environ, PYTHONHASHSEED=hashseed)
            r = subprocess.run([sys.executable, os.path.join(ROOT, "scripts", "cli_batch.py"), str(path)],
                               env=env, capture_output=True, text=True, timeout=1800)
            assert r.returncode == 0, r.stderr[-2000:]
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]
        text = outs[0].decode()
        headers = [line for line in text.splitlines() if line.startswith("### ")]
        assert len(headers) == 5 * len(_all_systems())
        assert all(h.endswith("exit=0") for h in headers), [h for h in headers if not h.endswith("exit=0")]

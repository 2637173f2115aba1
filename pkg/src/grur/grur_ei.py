"""Generic RUR by evaluation at integer parameter points and interpolation.

Each grid point w gets its own RUR over Q (``blackbox_rur``); every
coefficient of h0, h1, hX_i is then recovered as a rational function of W
by dense Cauchy interpolation under the a priori degree bounds.
"""
from __future__ import annotations

import itertools
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Iterator, Sequence

from .errors import (AmbiguousReconstruction, DenominatorVanishes, FormSearchFailed,
                     InsufficientGoodPoints, NoSolutionInBounds, NoSolutions,
                     NotZeroDimensional)
from .groebner import buchberger, dimension_check
from .poly import MultiPoly, grevlex
from .quotient import build_quotient
from .ratfunc import (RatFunc, RatFuncField, clear_denominators, flatten, parampoly_specialize,
                      to_parampoly)
from .rur import (GRUR, U0, LinearForm, assemble_grur, candidate_forms, characteristic_polynomial,
                  distinct_points, input_certificates, squarefree_degree, _nonconstant)


@dataclass(frozen=True)
class DegreeBounds:
    """A priori degree bounds for the coefficients of a generic RUR.

    ``kappa`` bounds numerator and denominator degrees in W of every
    coefficient; ``kappa_prime`` bounds the degree of the locus where a
    linear form may fail to separate.  The middle term of ``q`` is
    ``n dX^(n-1) dW``, a degree in W; a variant with ``dX`` in place of the
    last ``dW`` would not be a W-degree and is not used.
    """

    n: int
    s: int
    dX: int
    dW: int

    @property
    def kappa(self) -> int:
        return (self.n + 1) * self.dX ** self.n * self.dW

    @property
    def kappa_prime(self) -> int:
        return 2 * (self.n + 1) * self.dX ** (2 * self.n) * self.dW

    @property
    def q(self) -> int:
        return self.kappa_prime + self.n * self.dX ** (self.n - 1) * self.dW + self.n * self.dW

    @property
    def k0(self) -> int:
        if self.dW == 0 or self.s == 0:
            return 1
        q = self.q
        x = q + Fraction((self.kappa + 1) ** self.s, q ** (self.s - 1))
        return -((-x.numerator) // x.denominator)

    @property
    def deg_u(self) -> int:
        return self.dX ** self.n

    @property
    def nonseparating_allowance(self) -> int:
        return self.kappa_prime * self.k0 ** max(self.s - 1, 0)

    def grid_is_sufficient(self) -> bool:
        k0, s = self.k0, self.s
        return k0 ** s - self.q * k0 ** (s - 1) >= (self.kappa + 1) ** s


def degree_bounds(n: int, s: int, dX: int, dW: int) -> DegreeBounds:
    return DegreeBounds(n, s, dX, dW)


def build_grid(bounds: DegreeBounds) -> Iterator[tuple]:
    """All of {1..k0}^s in lexicographic order."""
    r = range(1, bounds.k0 + 1)
    return (tuple(Fraction(x) for x in p) for p in itertools.product(r, repeat=bounds.s))


def grid_shells(bounds: DegreeBounds) -> Iterator[tuple]:
    """The same grid by growing boxes {1..m}^s, lexicographic within each shell."""
    s, k0 = bounds.s, bounds.k0
    if s == 0:
        yield ()
        return
    for m in range(1, k0 + 1):
        for p in itertools.product(range(1, m + 1), repeat=s):
            if m in p:
                yield tuple(Fraction(x) for x in p)


# --------------------------------------------------------- per-point work

@dataclass
class EvaluationRecord:
    point: tuple
    status: str  # "ok", "rejected" or "not_separating"
    reason: str = ""
    rur: GRUR | None = None


@dataclass
class _PointData:
    qs: object = None
    distinct: int = 0
    reason: str = ""


def blackbox_rur(system: Sequence[MultiPoly], t: LinearForm) -> GRUR | None:
    """RUR of a system over Q for the form ``t``, or None if t does not separate."""
    G = buchberger(list(system), grevlex(len(system[0].vars)))
    if G.is_unit():
        raise NoSolutions("the specialized system has no solutions")
    if dimension_check(G) != "zero_dimensional":
        raise NotZeroDimensional("the specialized system is not zero-dimensional")
    qs = build_quotient(G)
    chi = characteristic_polynomial(qs, t)
    if squarefree_degree(chi) != distinct_points(qs):
        return None
    return assemble_grur(qs, t, chi, ())


def _evaluate_point(system, lead_nums, params, w) -> _PointData:
    pt = dict(zip(params, w))
    if any(c.evaluate(pt) == 0 for c in lead_nums):
        return _PointData(reason="leading coefficient vanishes")
    try:
        fw = [parampoly_specialize(f, pt) for f in system]
    except DenominatorVanishes:
        return _PointData(reason="denominator vanishes")
    G = buchberger(fw, grevlex(len(system[0].vars)))
    if G.is_unit():
        return _PointData(reason="no solutions")
    if dimension_check(G) != "zero_dimensional":
        return _PointData(reason="not zero-dimensional")
    qs = build_quotient(G)
    return _PointData(qs=qs, distinct=distinct_points(qs))


# --------------------------------------------------------- interpolation

def _monomials(s: int, d: int) -> list:
    out = []
    for total in range(d + 1):
        for e in itertools.product(range(total + 1), repeat=s):
            if sum(e) == total:
                out.append(e)
    return out


def _eval_mono(e, w):
    v = Fraction(1)
    for k, x in zip(e, w):
        if k:
            v *= x ** k
    return v


def nullspace(rows: list, ncols: int) -> list:
    """Basis of the right nullspace of a rational matrix.

    Fraction-free elimination on the integer-scaled rows; every division
    by the previous pivot is exact.  Back substitution runs only when the
    nullspace is nonzero.
    """
    A = []
    for row in rows:
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        A.append([int(x * den) for x in row])
    pivots = []
    r, prev = 0, 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        top = A[r]
        p = top[c]
        for i in range(r + 1, len(A)):
            row = A[i]
            f = row[c]
            A[i] = [(p * x - f * y) // prev for x, y in zip(row, top)]
        prev = p
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i in range(len(pivots) - 1, -1, -1):
            pc, row = pivots[i], A[i]
            acc = sum(row[k] * v[k] for k in range(pc + 1, ncols) if row[k] and v[k])
            v[pc] = -Fraction(acc) / row[pc]
        basis.append(v)
    return basis


def _fit(samples, nm, qm, params):
    rows = [[_eval_mono(e, w) for e in nm] + [-v * _eval_mono(e, w) for e in qm] for w, v in samples]
    found = None
    for vec in nullspace(rows, len(nm) + len(qm)):
        N = MultiPoly(params, {e: c for e, c in zip(nm, vec[:len(nm)]) if c})
        Q = MultiPoly(params, {e: c for e, c in zip(qm, vec[len(nm):]) if c})
        if Q.is_zero():
            continue
        r = RatFunc(N, Q)
        if found is not None and r != found:
            raise AmbiguousReconstruction("several rational functions fit the samples")
        found = r
    return found


def _reproduces(r: RatFunc, samples) -> bool:
    try:
        return all(r.evaluate(w) == v for w, v in samples)
    except DenominatorVanishes:
        return False


def _default_params(s: int) -> tuple:
    return ("W",) if s == 1 else tuple(f"W{i + 1}" for i in range(s))


def reconstruct_coefficient(samples, num_deg_bound: int, den_deg_bound: int,
                            params: Sequence[str] | None = None, extra: int = 1) -> RatFunc:
    """Rational function N/Q with deg N, deg Q within the bounds matching every sample.

    Degrees are tried from 0 upwards; at degree d the homogeneous system
    ``N(w) - v Q(w) = 0`` over all samples is solved exactly, and a solution
    is accepted only if at least ``extra`` samples exceed the number of
    unknowns minus one.  Every sample therefore doubles as a check.
    """
    samples = [(tuple(Fraction(x) for x in w), Fraction(v)) for w, v in samples]
    if not samples:
        raise NoSolutionInBounds("no samples")
    s = len(samples[0][0])
    params = tuple(params) if params is not None else _default_params(s)
    if s == 0:
        if len({v for _, v in samples}) != 1:
            raise NoSolutionInBounds("constant samples disagree")
        return RatFunc(MultiPoly.constant(samples[0][1], params))
    short = False
    for d in range(max(num_deg_bound, den_deg_bound) + 1):
        nm = _monomials(s, min(d, num_deg_bound))
        qm = _monomials(s, min(d, den_deg_bound))
        m = len(nm) + len(qm)
        if len(samples) < m - 1 + extra:
            short = True
            break
        try:
            found = _fit(samples[:m + 1], nm, qm, params)
        except AmbiguousReconstruction:
            found = False
        if found is None:
            # no fit on a subset of the samples, so none on all of them
            continue
        if found and not _reproduces(found, samples):
            found = False
        if found is False:
            # the quick fit on a leading block failed; decide on every sample
            found = _fit(samples, nm, qm, params)
            if found is None:
                continue
            if not _reproduces(found, samples):
                raise AmbiguousReconstruction("reconstruction does not reproduce the samples")
        return found
    if short:
        raise AmbiguousReconstruction("not enough samples to decide; supply more")
    raise NoSolutionInBounds("no rational function within the degree bounds fits the samples")


def sample_target(bounds: DegreeBounds) -> int:
    k, s = bounds.kappa, bounds.s
    if k == 0 or s == 0:
        return 1
    return 2 * comb(k + s, s) - 1 + k


# --------------------------------------------------------- driver

@dataclass
class EIConfig:
    workers: int = field(default_factory=lambda: int(os.environ.get("GRUR_THREADS", "1") or 1))
    batch: int = 8


def measure_degrees(system: Sequence[MultiPoly]) -> tuple:
    """(dX, dW): max total degrees in the unknowns and in the parameters."""
    dX = dW = 0
    for f in system:
        g = flatten(clear_denominators(f))
        s = len(f.domain.params)
        for e in g.terms:
            dW = max(dW, sum(e[:s]))
            dX = max(dX, sum(e[s:]))
    return dX, dW


def grur_ei(system: Sequence[MultiPoly], seed=0, config: EIConfig | None = None,
            forms=None) -> GRUR:
    """Generic RUR by evaluation/interpolation over ``Q(W)``.

    ``seed`` is accepted for symmetry with the linear-algebra pipeline; the
    grid walk is deterministic.
    """
    config = config or EIConfig()
    system = list(system)
    dom = system[0].domain
    if not isinstance(dom, RatFuncField):
        # no parameters: a single evaluation, returned over Q
        field0 = RatFuncField(())
        g = grur_ei([to_parampoly(f, field0, f.vars) for f in system], seed, config, forms)
        polys = [parampoly_specialize(p, {}) for p in g.polys()]
        return GRUR(g.t, polys[0], polys[1], polys[2:], g.vars, (), False, [], meta=g.meta)
    params, vars = dom.params, system[0].vars
    n, s = len(vars), len(params)
    dX, dW = measure_degrees(system)
    bounds = degree_bounds(n, s, dX, dW)
    target = sample_target(bounds)
    allowance = bounds.nonseparating_allowance
    lead_nums = _nonconstant([f.lc().num for f in system if not f.is_zero()])
    cache: dict = {}
    order = list(grid_shells(bounds))
    pool = ThreadPoolExecutor(config.workers) if config.workers > 1 else None

    def points(idxs):
        todo = [i for i in idxs if i not in cache]
        if pool is not None and len(todo) > 1:
            res = pool.map(lambda i: _evaluate_point(system, lead_nums, params, order[i]), todo)
        else:
            res = (_evaluate_point(system, lead_nums, params, order[i]) for i in todo)
        for i, r in zip(todo, res):
            cache[i] = r

    try:
        any_good = False
        for t in (forms if forms is not None else candidate_forms(n, max(1, bounds.deg_u))):
            records: list = []
            by_degree: Counter = Counter()
            failures = 0
            abandoned = False
            done = False
            for start in range(0, len(order), config.batch * max(1, config.workers)):
                idxs = list(range(start, min(len(order), start + config.batch * max(1, config.workers))))
                points(idxs)
                for i in idxs:
                    pd = cache[i]
                    w = order[i]
                    if pd.qs is None:
                        records.append(EvaluationRecord(w, "rejected", pd.reason))
                        continue
                    any_good = True
                    chi = characteristic_polynomial(pd.qs, t)
                    if squarefree_degree(chi) != pd.distinct:
                        records.append(EvaluationRecord(w, "not_separating"))
                        failures += 1
                        if failures > allowance:
                            abandoned = True
                            break
                        continue
                    rur = assemble_grur(pd.qs, t, chi, ())
                    records.append(EvaluationRecord(w, "ok", rur=rur))
                    by_degree[rur.D] += 1
                    if by_degree.most_common(1)[0][1] >= target:
                        done = True
                        break
                if abandoned or done:
                    break
            if abandoned:
                continue
            if not done:
                if not any_good:
                    raise InsufficientGoodPoints("every grid point was rejected")
                raise InsufficientGoodPoints(
                    f"only {max(by_degree.values(), default=0)} good points of {target} needed")
            D = by_degree.most_common(1)[0][0]
            good = []
            for r in records:
                if r.status == "ok" and r.rur.D != D:
                    r.status, r.reason = "rejected", f"degree {r.rur.D} differs from {D}"
                elif r.status == "ok":
                    good.append(r)
            g = _interpolate(good, t, vars, params, bounds)
            g.meta = {"records": records, "bounds": bounds, "D": D}
            dens = [c.den for p in g.polys() for c in p.terms.values() if not c.is_polynomial()]
            g.certificates = _nonconstant(input_certificates(system) + dens)
            return g
        raise FormSearchFailed("no candidate linear form separates the solutions")
    finally:
        if pool is not None:
            pool.shutdown()


def _interpolate(good, t, vars, params, bounds) -> GRUR:
    field_ = RatFuncField(params)
    extra = max(1, bounds.kappa)
    npolys = len(good[0].rur.polys())
    polys = []
    for k in range(npolys):
        dense = [r.rur.polys()[k].to_dense() for r in good]
        top = max(len(c) for c in dense)
        coeffs = []
        for j in range(top):
            smp = [(r.point, c[j] if j < len(c) else Fraction(0)) for r, c in zip(good, dense)]
            if all(v == 0 for _, v in smp):
                coeffs.append(field_.zero)
                continue
            coeffs.append(reconstruct_coefficient(smp, bounds.kappa, bounds.kappa, params, extra))
        polys.append(MultiPoly.from_dense(coeffs, U0, field_))
    g = GRUR(t, polys[0], polys[1], polys[2:], tuple(vars), tuple(params), separating_certified=False)
    return g

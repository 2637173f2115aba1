"""The finite-dimensional algebra field[X]/I of a zero-dimensional ideal.

Elements are dense coordinate vectors on the monomial basis ``p_1 = 1 < p_2
< ... < p_D`` of irreducible monomials.  Matrices are lists of rows.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import NoSolutions, NotZeroDimensional, StructureError
from .groebner import GroebnerBasis, dimension_check
from .poly import MultiPoly, mono_divides
from .ratfunc import RatFunc, RatFuncField, sum_of_products


@dataclass
class QuotientStructure:
    basis_monomials: list
    mult_matrices: list
    vars: tuple
    domain: object
    mult_tensor: list | None = None
    traces: list | None = None
    groebner: GroebnerBasis | None = field(default=None, repr=False)

    @property
    def D(self) -> int:
        return len(self.basis_monomials)

    @property
    def n(self) -> int:
        return len(self.vars)

    def index(self, m) -> int:
        return self.basis_monomials.index(tuple(m))

    def coordinates(self, p: MultiPoly) -> list:
        """Coordinate vector of the class of ``p`` (reduced first)."""
        r = self.groebner.normal_form(p) if self.groebner is not None else p
        v = [self.domain.zero] * self.D
        pos = {m: i for i, m in enumerate(self.basis_monomials)}
        for e, c in r.terms.items():
            if e not in pos:
                raise StructureError(f"monomial {e} is not a basis monomial")
            v[pos[e]] = c
        return v

    def element(self, v) -> MultiPoly:
        return MultiPoly(self.vars, {m: c for m, c in zip(self.basis_monomials, v) if c}, self.domain)


# ---------------------------------------------------------------- linear algebra

def _rat_dot(u, v):
    pairs = [(a, b) for a, b in zip(u, v) if a and b]
    field = RatFuncField(pairs[0][0].params) if pairs else None
    if field is None:
        return (u[0] - u[0]) if u else 0
    return sum_of_products(pairs, field)


def _is_rat(v):
    return any(isinstance(x, RatFunc) for x in v)


def mat_vec(M, v):
    if _is_rat(v) or (M and _is_rat(M[0])):
        return [_rat_dot(row, v) for row in M]
    zero = v[0] - v[0] if v else 0
    out = []
    for row in M:
        s = zero
        for a, b in zip(row, v):
            if a and b:
                s = s + a * b
        out.append(s)
    return out


def mat_mul(A, B):
    cols = [list(c) for c in zip(*B)]
    return [[dot(row, c) for c in cols] for row in A]


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[a * c for a in row] for row in A]


def dot(u, v):
    if len(u) != len(v):
        raise StructureError(f"length mismatch: {len(u)} vs {len(v)}")
    if _is_rat(u) or _is_rat(v):
        return _rat_dot(u, v)
    s = None
    for a, b in zip(u, v):
        if a and b:
            s = a * b if s is None else s + a * b
    if s is None:
        return (u[0] - u[0]) if u else 0
    return s


def rank(M) -> int:
    """Exact rank by Gaussian elimination over the coefficient field."""
    A = [list(r) for r in M]
    if not A:
        return 0
    rows, cols = len(A), len(A[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        for i in range(r + 1, rows):
            if A[i][c]:
                f = A[i][c] * inv
                A[i] = [x - f * y if y else x for x, y in zip(A[i], A[r])]
        r += 1
        if r == rows:
            break
    return r


def specialize_matrix(M, w):
    return [[c.evaluate(w) if hasattr(c, "evaluate") else c for c in row] for row in M]


# ---------------------------------------------------------------- construction

def quotient_basis(basis: GroebnerBasis) -> list:
    """Irreducible monomials, found breadth-first from 1, sorted ascending."""
    if basis.is_unit():
        return []
    if dimension_check(basis) != "zero_dimensional":
        raise NotZeroDimensional("the ideal is not zero-dimensional")
    lms = basis.leading_monomials()
    n = len(basis.vars)

    def reducible(m):
        return any(mono_divides(l, m) for l in lms)

    one = (0,) * n
    seen = {one}
    queue = deque([one])
    while queue:
        m = queue.popleft()
        for i in range(n):
            x = m[:i] + (m[i] + 1,) + m[i + 1:]
            if x not in seen and not reducible(x):
                seen.add(x)
                queue.append(x)
    return sorted(seen, key=basis.order.key)


def multiplication_matrices(basis: GroebnerBasis, qbasis: list) -> list:
    """Matrices of multiplication by each unknown.

    Basis and border monomials are visited in increasing order, so every
    border monomial is either a leading monomial (read off its basis
    element) or ``X_j`` times an earlier border monomial.
    """
    order, dom = basis.order, basis.domain
    n, D = len(basis.vars), len(qbasis)
    pos = {m: i for i, m in enumerate(qbasis)}
    by_lm = {g.lm(order): g for g in basis.elements}

    def shift(m, j):
        return m[:j] + (m[j] + 1,) + m[j + 1:]

    border = {shift(b, j) for b in qbasis for j in range(n)} - set(qbasis)
    coord: dict = {}
    for m in sorted(set(qbasis) | border, key=order.key):
        if m in pos:
            v = [dom.zero] * D
            v[pos[m]] = dom.one
        elif m in by_lm:
            v = [dom.zero] * D
            for e, c in by_lm[m].terms.items():
                if e != m:
                    v[pos[e]] = -c
        else:
            j = next(j for j in range(n) if m[j] and m[:j] + (m[j] - 1,) + m[j + 1:] not in pos)
            mp = m[:j] + (m[j] - 1,) + m[j + 1:]
            v = [dom.zero] * D
            for k, a in enumerate(coord[mp]):
                if a:
                    w = coord[shift(qbasis[k], j)]
                    v = [x + a * y if y else x for x, y in zip(v, w)]
        coord[m] = v
    mats = []
    for i in range(n):
        cols = [coord[shift(b, i)] for b in qbasis]
        mats.append([[cols[c][r] for c in range(D)] for r in range(D)])
    return mats


def multiplicative_tensor(qs: QuotientStructure) -> list:
    """``T[i][j]`` = coordinates of ``p_i * p_j``, by recursion on degree."""
    D, n = qs.D, qs.n
    dom = qs.domain
    memo: dict = {}
    for i, m in enumerate(qs.basis_monomials):
        v = [dom.zero] * D
        v[i] = dom.one
        memo[m] = v

    def coords(m):
        if m in memo:
            return memo[m]
        k = next(k for k in range(n) if m[k])
        sub = m[:k] + (m[k] - 1,) + m[k + 1:]
        v = mat_vec(qs.mult_matrices[k], coords(sub))
        memo[m] = v
        return v

    T = [[None] * D for _ in range(D)]
    B = qs.basis_monomials
    for i in range(D):
        for j in range(i, D):
            v = coords(tuple(a + b for a, b in zip(B[i], B[j])))
            T[i][j] = T[j][i] = v
    return T


def traces_vector(qs: QuotientStructure) -> list:
    if qs.mult_tensor is None:
        raise StructureError("multiplicative tensor not computed")
    return [sum_diag(qs.mult_tensor[i], qs.domain) for i in range(qs.D)]


def sum_diag(row, dom):
    s = dom.zero
    for j, v in enumerate(row):
        if v[j]:
            s = s + v[j]
    return s


def trace_of(v, qs: QuotientStructure):
    if len(v) != qs.D:
        raise StructureError(f"vector of length {len(v)} in a quotient of dimension {qs.D}")
    return dot(v, qs.traces) if qs.D else qs.domain.zero


def hermite_matrix(qs: QuotientStructure) -> list:
    T = qs.mult_tensor
    H = [[None] * qs.D for _ in range(qs.D)]
    for i in range(qs.D):
        for j in range(i, qs.D):
            H[i][j] = H[j][i] = trace_of(T[i][j], qs)
    return H


def build_quotient(basis: GroebnerBasis) -> QuotientStructure:
    """Basis, matrices, tensor and traces in one go."""
    qb = quotient_basis(basis)
    if not qb:
        raise NoSolutions("the ideal contains 1")
    mats = multiplication_matrices(basis, qb)
    qs = QuotientStructure(qb, mats, basis.vars, basis.domain, groebner=basis)
    qs.mult_tensor = multiplicative_tensor(qs)
    qs.traces = traces_vector(qs)
    return qs

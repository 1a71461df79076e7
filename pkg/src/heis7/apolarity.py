"""Plane-quartic apolarity and the order-168 plane action.

Everything exact lives here: the restricted group action on the 3-dimensional
eigenspace, the unique invariant quartic and sextic, the 6x6 catalecticant
pairing, antipolar conics, the dual quartic and the singular-conic sextic.

Coordinate conventions: monomial basis of the degree-2 pairing is
(a^2, b^2, c^2, ab, ac, bc).  The catalecticant entry at (mu, nu) is the
iterated partial derivative d^(mu+nu) F, a scalar for quartic F.  With
m(v) = (v1^2, v2^2, v3^2, v1v2, v1v3, v2v3) the antipolar conic of a dual
point l is the quadratic form x -> m(x)^T B^-1 m(l), which is symmetric in
(x, l).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    OrderGuardExceeded,
    RestrictionFailure,
    SingularCatalecticant,
    UniquenessFailure,
)
from .exactcore import (
    CYC_ONE,
    CYC_ZERO,
    CycNum,
    ExactMatrix,
    MPoly,
    monomials_of_degree,
)
from . import heisenberg

DEG2_MONOMIALS = ((2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1))
# dual-basis weights 1/mu! for the six degree-2 monomials, cleared to integers
_PAIRING_WEIGHTS = (1, 1, 1, 2, 2, 2)

PLANE_BASIS = (
    ((0, 1, 0, 0, 0, 0, -1)),  # e1 - e6
    ((0, 0, 1, 0, 0, -1, 0)),  # e2 - e5
    ((0, 0, 0, 1, -1, 0, 0)),  # e3 - e4
)
SPACE_BASIS = (
    (1, 0, 0, 0, 0, 0, 0),  # e0
    (0, 1, 0, 0, 0, 0, 1),  # e1 + e6
    (0, 0, 1, 0, 0, 1, 0),  # e2 + e5
    (0, 0, 0, 1, 1, 0, 0),  # e3 + e4
)


@dataclass(frozen=True)
class PlaneQuartic:
    """Ternary quartic; ``on_dual`` flags forms living on the dual plane."""

    form: MPoly
    on_dual: bool = False

    def __post_init__(self):
        if self.form.nvars != 3 or (not self.form.is_zero() and self.form.degree() != 4):
            raise ValueError("need a ternary quartic")


@dataclass(frozen=True)
class Catalecticant:
    """The 6x6 second-partials pairing of a quartic and its exact rank."""

    matrix: ExactMatrix
    rank: int

    @property
    def is_clebsch(self) -> bool:
        return self.rank <= 5


class ConicForm:
    """Plane conic given by a symmetric 3x3 gram matrix (exact or complex)."""

    __slots__ = ("gram", "exact")

    def __init__(self, gram, exact: bool):
        self.gram = gram
        self.exact = exact

    def rank(self, tol: float = 1e-9) -> int:
        if self.exact:
            return self.gram.rank()
        s = np.linalg.svd(self.gram, compute_uv=False)
        if s[0] == 0:
            return 0
        return int(np.sum(s > tol * s[0]))

    def evaluate(self, x):
        if self.exact:
            xs = list(x)
            out = CYC_ZERO
            for i in range(3):
                for j in range(3):
                    out = out + self.gram.entry(i, j) * xs[i] * xs[j]
            return out
        v = np.asarray(x, dtype=complex)
        return complex(v @ self.gram @ v)


# ---------------------------------------------------------------------------
# restricted group action
# ---------------------------------------------------------------------------


def _restrict_to_span(M: ExactMatrix, basis) -> ExactMatrix:
    """Matrix of M on span(basis), i.e. solve M b_j = sum_i R[i][j] b_i."""
    cols = ExactMatrix([[CycNum.from_rat(b[i]) if not isinstance(b[i], CycNum) else b[i]
                         for b in basis] for i in range(7)])
    out_cols = []
    for b in basis:
        vec = [c if isinstance(c, CycNum) else CycNum.from_rat(c) for c in b]
        img = M.apply(vec)
        sol = cols.solve(img)
        if sol is None:
            raise RestrictionFailure("matrix does not preserve the subspace")
        out_cols.append(sol)
    return ExactMatrix([[out_cols[j][i] for j in range(len(basis))] for i in range(len(basis))])


def _normalize_det_one(M: ExactMatrix) -> ExactMatrix:
    """Scale a 3x3 matrix by a sign so its determinant becomes 1."""
    d = M.det()
    if d == CYC_ONE:
        return M
    if d == CycNum.from_rat(-1):
        return M * CycNum.from_rat(-1)
    raise RestrictionFailure("determinant %r is not +-1" % d)


def plane_group_action():
    """Restrictions of fourier_S and gauss_V to the 3-dimensional eigenspace."""
    gens = heisenberg.generators()
    S3 = _normalize_det_one(_restrict_to_span(gens["fourier_S"].matrix, PLANE_BASIS))
    V3 = _normalize_det_one(_restrict_to_span(gens["gauss_V"].matrix, PLANE_BASIS))
    return {"S": S3, "V": V3}


def space_group_action():
    """Restrictions of fourier_S and gauss_V to the 4-dimensional eigenspace."""
    gens = heisenberg.generators()
    S4 = _restrict_to_span(gens["fourier_S"].matrix, SPACE_BASIS)
    V4 = _restrict_to_span(gens["gauss_V"].matrix, SPACE_BASIS)
    return {"S": S4, "V": V4}


def _proj_key(M: ExactMatrix):
    for i in range(M.rows):
        for j in range(M.cols):
            v = M.entry(i, j)
            if not v.is_zero():
                scaled = M * v.inverse()
                return tuple(tuple(scaled.row(k)) for k in range(M.rows))
    raise ValueError("zero matrix")


def projective_group_order(mats, guard: int = 10 ** 4) -> int:
    """Order of the projective matrix group generated by ``mats``."""
    seen = {_proj_key(ExactMatrix.identity(mats[0].rows))}
    frontier = [ExactMatrix.identity(mats[0].rows)]
    while frontier:
        nxt = []
        for g in frontier:
            for h in mats:
                gh = g * h
                k = _proj_key(gh)
                if k not in seen:
                    seen.add(k)
                    nxt.append(gh)
                    if len(seen) > guard:
                        raise OrderGuardExceeded("projective closure exceeded %d" % guard)
        frontier = nxt
    return len(seen)


# ---------------------------------------------------------------------------
# invariant forms of the plane action
# ---------------------------------------------------------------------------


def compose(P: MPoly, M: ExactMatrix) -> MPoly:
    """P(M x): substitute x_i -> sum_j M[i][j] x_j."""
    images = []
    for i in range(P.nvars):
        terms = {}
        for j in range(P.nvars):
            v = M.entry(i, j)
            if not v.is_zero():
                e = [0] * P.nvars
                e[j] = 1
                terms[tuple(e)] = v
        images.append(MPoly(P.nvars, terms))
    return P.substitute(images)


def invariant_forms(mats, nvars: int, degree: int) -> list:
    """Basis of forms fixed by P -> P(M x) for every M in ``mats``."""
    monoms = monomials_of_degree(nvars, degree)
    index = {m: k for k, m in enumerate(monoms)}
    rows = []
    for M in mats:
        # action matrix A: column j holds coefficients of compose(monomial_j, M)
        for_cols = []
        for m in monoms:
            img = compose(MPoly.monomial(nvars, m), M)
            for_cols.append(img)
        for r, mon in enumerate(monoms):
            row = []
            for c, img in enumerate(for_cols):
                v = img.terms.get(mon, CYC_ZERO)
                if r == c:
                    v = v - CYC_ONE
                row.append(v)
            rows.append(row)
    kernel = ExactMatrix(rows).kernel_basis()
    out = []
    for vec in kernel:
        out.append(MPoly(nvars, {m: vec[k] for k, m in enumerate(monoms)}))
    return out


def _normalize_leading(P: MPoly) -> MPoly:
    lead = P.leading_coefficient()
    if lead.is_zero():
        return P
    return P * lead.inverse()


def invariant_quartic() -> PlaneQuartic:
    """The unique invariant quartic of the plane action (form on the plane)."""
    act = plane_group_action()
    basis = invariant_forms([act["S"], act["V"]], 3, 4)
    if len(basis) != 1:
        raise UniquenessFailure("invariant quartics have dimension %d" % len(basis))
    return PlaneQuartic(_normalize_leading(basis[0]))


def invariant_sextic() -> MPoly:
    """The unique invariant sextic (the Hessian line)."""
    act = plane_group_action()
    basis = invariant_forms([act["S"], act["V"]], 3, 6)
    if len(basis) != 1:
        raise UniquenessFailure("invariant sextics have dimension %d" % len(basis))
    return _normalize_leading(basis[0])


def dual_invariant_quartic() -> PlaneQuartic:
    """The invariant quartic of the contragredient action (form on the dual plane)."""
    act = plane_group_action()
    mats = [act["S"].inverse().transpose(), act["V"].inverse().transpose()]
    basis = invariant_forms(mats, 3, 4)
    if len(basis) != 1:
        raise UniquenessFailure("dual invariant quartics have dimension %d" % len(basis))
    return PlaneQuartic(_normalize_leading(basis[0]), on_dual=True)


def klein_normal_form() -> PlaneQuartic:
    """The classical model x^3 y + y^3 z + z^3 x."""
    return PlaneQuartic(MPoly(3, {(3, 1, 0): CYC_ONE, (0, 3, 1): CYC_ONE, (1, 0, 3): CYC_ONE}))


# ---------------------------------------------------------------------------
# catalecticant and antipolar machinery
# ---------------------------------------------------------------------------


def partial(P: MPoly, i: int) -> MPoly:
    out = {}
    for e, c in P.terms.items():
        if e[i]:
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
    return MPoly(P.nvars, out)


def _iterated_partial(P: MPoly, exps) -> MPoly:
    out = P
    for i, a in enumerate(exps):
        for _ in range(a):
            out = partial(out, i)
    return out


def catalecticant(F: PlaneQuartic) -> Catalecticant:
    """6x6 pairing matrix; its exact rank is the minimal power-sum length."""
    entries = []
    for mu in DEG2_MONOMIALS:
        row = []
        dmu = _iterated_partial(F.form, mu)
        for nu in DEG2_MONOMIALS:
            val = _iterated_partial(dmu, nu)
            row.append(val.terms.get((0, 0, 0), CYC_ZERO))
        entries.append(row)
    M = ExactMatrix(entries)
    return Catalecticant(M, M.rank())


def monomial_vector(point) -> list:
    """(v1^2, v2^2, v3^2, v1v2, v1v3, v2v3) for a 3-vector of scalars."""
    v1, v2, v3 = point
    return [v1 * v1, v2 * v2, v3 * v3, v1 * v2, v1 * v3, v2 * v3]


def _gram_from_quadric_coeffs(h):
    """Gram matrix of h1 x^2 + ... + h4 xy + h5 xz + h6 yz (entries halved off-diagonal)."""
    half = Fraction(1, 2)
    if isinstance(h[0], CycNum):
        hf = [v * CycNum.from_rat(half) for v in h]
        return ExactMatrix(
            [
                [h[0], hf[3], hf[4]],
                [hf[3], h[1], hf[5]],
                [hf[4], hf[5], h[2]],
            ]
        )
    return np.array(
        [
            [h[0], h[3] / 2, h[4] / 2],
            [h[3] / 2, h[1], h[5] / 2],
            [h[4] / 2, h[5] / 2, h[2]],
        ],
        dtype=complex,
    )


def antipolar_conic(F: PlaneQuartic, ell, cat: Catalecticant | None = None) -> ConicForm:
    """Antipolar conic of the dual-plane point ``ell`` with respect to F.

    Exact when ``ell`` has CycNum/rational entries, complex-numeric otherwise.
    The result is projective; no scale normalization is applied.
    """
    if cat is None:
        cat = catalecticant(F)
    if cat.rank != 6:
        raise SingularCatalecticant("catalecticant rank %d < 6" % cat.rank)
    exact = all(isinstance(c, (CycNum, int, Fraction)) for c in ell)
    if exact:
        vec = [c if isinstance(c, CycNum) else CycNum.from_rat(c) for c in ell]
        m = monomial_vector(vec)
        h = cat.matrix.inverse().apply(m)
        return ConicForm(_gram_from_quadric_coeffs(h), exact=True)
    binv = np.linalg.inv(cat.matrix.to_complex())
    m = np.array(monomial_vector([complex(c) for c in ell]), dtype=complex)
    h = binv @ m
    return ConicForm(_gram_from_quadric_coeffs(h), exact=False)


def _symbolic_monomial_vector(nvars: int = 3) -> list:
    xs = [MPoly.variable(nvars, i) for i in range(nvars)]
    return [xs[0] * xs[0], xs[1] * xs[1], xs[2] * xs[2], xs[0] * xs[1], xs[0] * xs[2], xs[1] * xs[2]]


def dual_quartic(F: PlaneQuartic, cat: Catalecticant | None = None) -> PlaneQuartic:
    """F_flat(l) = m(l)^T B^-1 m(l); the locus of l lying on their own antipolar conic."""
    if cat is None:
        cat = catalecticant(F)
    if cat.rank != 6:
        raise SingularCatalecticant("catalecticant rank %d < 6" % cat.rank)
    binv = cat.matrix.inverse()
    m = _symbolic_monomial_vector()
    total = MPoly.zero(3)
    for i in range(6):
        for j in range(6):
            c = binv.entry(i, j)
            if not c.is_zero():
                total = total + (m[i] * m[j]) * c
    return PlaneQuartic(total, on_dual=not F.on_dual)


def singular_locus_sextic(F: PlaneQuartic, cat: Catalecticant | None = None) -> MPoly:
    """H_F: determinant of the antipolar gram, where the conic breaks in two lines."""
    if cat is None:
        cat = catalecticant(F)
    if cat.rank != 6:
        raise SingularCatalecticant("catalecticant rank %d < 6" % cat.rank)
    binv = cat.matrix.inverse()
    m = _symbolic_monomial_vector()
    h = [MPoly.zero(3) for _ in range(6)]
    for i in range(6):
        for j in range(6):
            c = binv.entry(i, j)
            if not c.is_zero():
                h[i] = h[i] + m[j] * c
    half = CycNum.from_rat(Fraction(1, 2))
    g = [
        [h[0], h[3] * half, h[4] * half],
        [h[3] * half, h[1], h[5] * half],
        [h[4] * half, h[5] * half, h[2]],
    ]
    det = (
        g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
        - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
    )
    return det


def hessian_determinant(P: MPoly) -> MPoly:
    """det of the 3x3 matrix of second partials."""
    h = [[_iterated_partial(P, _unit2(i, j)) for j in range(3)] for i in range(3)]
    return (
        h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
        - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
        + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0])
    )


def _unit2(i, j):
    e = [0, 0, 0]
    e[i] += 1
    e[j] += 1
    return tuple(e)


def polar_cubic(F: PlaneQuartic, a) -> MPoly:
    """Single contraction of F at the plane point a (exact entries)."""
    vec = [c if isinstance(c, CycNum) else CycNum.from_rat(c) for c in a]
    out = MPoly.zero(3)
    for i in range(3):
        if not vec[i].is_zero():
            out = out + partial(F.form, i) * vec[i]
    return out


def hessian_triangle(F: PlaneQuartic, a) -> MPoly:
    """Hessian cubic of the polar cubic of a; factors into 3 lines generically.

    Returns the zero polynomial when the polar cubic is degenerate.
    """
    return hessian_determinant(polar_cubic(F, a))


def proportional(P: MPoly, Q: MPoly) -> bool:
    """Exact projective equality of two polynomials."""
    if P.is_zero() or Q.is_zero():
        return P.is_zero() and Q.is_zero()
    if set(P.terms) != set(Q.terms):
        return False
    e0 = next(iter(P.terms))
    ratio = Q.terms[e0] * P.terms[e0].inverse()
    return all(Q.terms[e] == P.terms[e] * ratio for e in P.terms)


# ---------------------------------------------------------------------------
# apolarity of the quadric Q_F with the dual Veronese
# ---------------------------------------------------------------------------


def veronese_quadric_space() -> list:
    """Basis of quadrics through the dual Veronese: symmetric 6x6 grams T with
    q(l)^T T q(l) = 0 for all l, where q(l) = (l1^2,...,2 l1 l2, 2 l1 l3, 2 l2 l3)."""
    # unknowns: upper triangle of T (21); equations: vanishing of each degree-4
    # coefficient of the quartic q(l)^T T q(l)
    pairs = [(i, j) for i in range(6) for j in range(i, 6)]
    q = _symbolic_monomial_vector()
    weights = [CYC_ONE, CYC_ONE, CYC_ONE, CycNum.from_rat(2), CycNum.from_rat(2), CycNum.from_rat(2)]
    q = [qi * w for qi, w in zip(q, weights)]
    deg4 = monomials_of_degree(3, 4)
    rows = {m: [CYC_ZERO] * len(pairs) for m in deg4}
    for k, (i, j) in enumerate(pairs):
        prod = q[i] * q[j]
        mult = CYC_ONE if i == j else CycNum.from_rat(2)
        for e, c in prod.terms.items():
            rows[e][k] = rows[e][k] + c * mult
    mat = ExactMatrix([rows[m] for m in deg4])
    kernel = mat.kernel_basis()
    grams = []
    for vec in kernel:
        g = [[CYC_ZERO] * 6 for _ in range(6)]
        for k, (i, j) in enumerate(pairs):
            g[i][j] = vec[k]
            g[j][i] = vec[k]
        grams.append(ExactMatrix(g))
    return grams


def veronese_apolarity_pairings(F: PlaneQuartic) -> list:
    """Trace pairings of the catalecticant against the quadrics through the
    dual Veronese; all must vanish exactly."""
    cat = catalecticant(F)
    d = [CycNum.from_rat(w) for w in _PAIRING_WEIGHTS]
    out = []
    for T in veronese_quadric_space():
        total = CYC_ZERO
        for i in range(6):
            for j in range(6):
                total = total + cat.matrix.entry(i, j) * d[i] * T.entry(i, j) * d[j]
        out.append(total)
    return out

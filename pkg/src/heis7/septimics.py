"""The 8-dimensional system of invariant septimics and the map it defines.

Basis construction is combinatorial and exact: filter the 1716 degree-7
exponent vectors by tau-weight, sum over sigma-orbits, and antisymmetrize
under index negation.  The sign comes from the determinant-1 realization of
the group's involution (-iota, which on degree-7 forms acts as minus the
plain index negation), and is what makes the space 8-dimensional.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BaseLocusPoint, DimensionMismatch, DivisionFailure, UniquenessFailure
from .exactcore import (
    CYC_ONE,
    CYC_ZERO,
    CycNum,
    ExactMatrix,
    MPoly,
    monomials_of_degree,
)
from . import heisenberg
from .apolarity import PLANE_BASIS, SPACE_BASIS, invariant_quartic

BASE_LOCUS_TOL = 1e-10


def weight_zero_exponents() -> list:
    """Degree-7 exponent vectors on 7 variables with sum(i * a_i) = 0 mod 7."""
    return [e for e in monomials_of_degree(7, 7) if sum(i * a for i, a in enumerate(e)) % 7 == 0]


def _shift(e):
    return e[-1:] + e[:-1]


def _negate(e):
    return tuple(e[(-i) % 7] for i in range(7))


def _shift_orbit(e):
    orb = {e}
    cur = _shift(e)
    while cur != e:
        orb.add(cur)
        cur = _shift(cur)
    return frozenset(orb)


@dataclass(frozen=True)
class SeptimicSystem:
    """Basis of the invariant septimics split into the trivial line and its complement."""

    basis: tuple  # 8 MPoly
    trivial_line: MPoly  # the unique normalizer-invariant septimic
    w7_part: tuple  # 7 MPoly spanning the irreducible complement


def invariant_septimic_monomial_basis() -> list:
    """Signed orbit-sum basis; exactly 8 elements with disjoint supports."""
    orbits = []
    seen = set()
    for e in weight_zero_exponents():
        if e in seen:
            continue
        orb = _shift_orbit(e)
        seen.update(orb)
        orbits.append(orb)
    by_key = {min(o): o for o in orbits}
    done = set()
    basis = []
    for key in sorted(by_key):
        orb = by_key[key]
        if orb in done:
            continue
        neg = frozenset(_negate(e) for e in orb)
        if neg == orb:
            done.add(orb)
            continue  # antisymmetrization kills self-paired orbits
        done.add(orb)
        done.add(neg)
        terms = {e: CYC_ONE for e in orb}
        terms.update({e: -CYC_ONE for e in neg})
        basis.append(MPoly(7, terms))
    return basis


def invariant_septimic_basis() -> SeptimicSystem:
    basis = invariant_septimic_monomial_basis()
    if len(basis) != 8:
        raise DimensionMismatch("invariant septimics have dimension %d, expected 8" % len(basis))
    s_mat = normalizer_action_matrix("fourier_S", basis)
    v_mat = normalizer_action_matrix("gauss_V", basis)
    ident = ExactMatrix.identity(8)
    stacked = ExactMatrix(
        [list((s_mat - ident).row(i)) for i in range(8)]
        + [list((v_mat - ident).row(i)) for i in range(8)]
    )
    fixed = stacked.kernel_basis()
    if len(fixed) != 1:
        raise UniquenessFailure(
            "normalizer-fixed subspace has dimension %d, expected 1" % len(fixed)
        )
    x7 = _combine(basis, fixed[0])
    lead = x7.leading_coefficient()
    x7 = x7 * lead.inverse()

    # complement: span of (g - 1)-images, the 7-dimensional irreducible part
    cols = []
    for mat in (s_mat - ident, v_mat - ident):
        for j in range(8):
            cols.append([mat.entry(i, j) for i in range(8)])
    comp = ExactMatrix(cols)  # rows are image vectors
    rref, pivots = comp.rref()
    if len(pivots) != 7:
        raise DimensionMismatch("complement of the trivial line has rank %d" % len(pivots))
    w7_vectors = [rref[k] for k in range(7)]
    w7 = tuple(_combine(basis, v) for v in w7_vectors)

    # no further invariant line inside the complement
    w7_mat = ExactMatrix([[w7_vectors[j][i] for j in range(7)] for i in range(8)])  # 8x7
    rows = []
    for mat in (s_mat, v_mat):
        imgs = mat * w7_mat  # 8x7, columns are images of the complement basis
        for j in range(7):
            col = [imgs.entry(i, j) for i in range(8)]
            sol = w7_mat.solve(col)
            if sol is None:
                raise DimensionMismatch("complement is not normalizer-stable")
            rows.append(sol)
    s7 = ExactMatrix(rows[:7]).transpose()
    v7 = ExactMatrix(rows[7:]).transpose()
    id7 = ExactMatrix.identity(7)
    inner = ExactMatrix(
        [list((s7 - id7).row(i)) for i in range(7)] + [list((v7 - id7).row(i)) for i in range(7)]
    )
    if inner.kernel_basis():
        raise UniquenessFailure("irreducible complement contains an invariant line")

    return SeptimicSystem(basis=tuple(basis), trivial_line=x7, w7_part=w7)


def _combine(basis, coeffs) -> MPoly:
    out = MPoly.zero(7)
    for c, p in zip(coeffs, basis):
        if not (isinstance(c, CycNum) and c.is_zero()):
            out = out + p * c
    return out


def _eval_points(n: int) -> list:
    # deterministic small rational points; extended on demand
    pts = []
    state = 1
    for _ in range(n):
        vec = []
        for _ in range(7):
            state = (state * 1103515245 + 12345) % (2 ** 31)
            vec.append(CycNum.from_rat((state % 11) - 5))
        pts.append(vec)
    return pts


def normalizer_action_matrix(name: str, basis) -> ExactMatrix:
    """Exact matrix of act(g, .) on the span of ``basis`` via point evaluation.

    act(g, P_j) = sum_k M[k][j] P_k; solved from values at deterministic
    rational points and verified on two extra points.  The generator is
    rescaled to determinant 1 first, so the trivial summand is honestly fixed.
    """
    g = heisenberg.sl_normalize(heisenberg.generators()[name])
    ginv = g.matrix.inverse()
    npts = 10
    while True:
        pts = _eval_points(npts)
        evals = ExactMatrix([[p.evaluate(pt) for p in basis] for pt in pts])
        # find 8 rows forming an invertible system
        sel = []
        for i in range(npts):
            trial = sel + [i]
            sub = ExactMatrix([evals.row(k) for k in trial])
            if sub.rank() == len(trial):
                sel = trial
            if len(sel) == len(basis):
                break
        if len(sel) == len(basis):
            break
        npts += 8
    sub = ExactMatrix([evals.row(k) for k in sel])
    rhs_rows = []
    for i in sel:
        moved = ginv.apply(pts[i])
        rhs_rows.append([p.evaluate(moved) for p in basis])
    rhs = ExactMatrix(rhs_rows)
    mat = sub.inverse() * rhs
    # consistency on the unused points (catches a non-stable span)
    extra = [i for i in range(npts) if i not in sel][:2]
    for i in extra:
        moved = ginv.apply(pts[i])
        want = [p.evaluate(moved) for p in basis]
        got = [
            sum((evals.entry(i, k) * mat.entry(k, j) for k in range(len(basis))), CYC_ZERO)
            for j in range(len(basis))
        ]
        if want != got:
            raise DimensionMismatch("span is not stable under %s" % name)
    return mat


def n7_invariant_septimic(system: SeptimicSystem | None = None) -> MPoly:
    """The unique septimic fixed by the whole normalizer, leading coefficient 1."""
    if system is None:
        system = invariant_septimic_basis()
    return system.trivial_line


# ---------------------------------------------------------------------------
# restriction, factorization on the plane, and the rational map
# ---------------------------------------------------------------------------


def restrict_to_subspace(P: MPoly, basis) -> MPoly:
    """Pull back P along x = sum_a t_a basis[a]; exact."""
    k = len(basis)
    vecs = [[c if isinstance(c, CycNum) else CycNum.from_rat(c) for c in b] for b in basis]
    if any(len(v) != P.nvars for v in vecs):
        raise ValueError("basis vectors must match the ambient variable count")
    images = []
    for j in range(P.nvars):
        terms = {}
        for a in range(k):
            c = vecs[a][j]
            if not c.is_zero():
                e = [0] * k
                e[a] = 1
                terms[tuple(e)] = c
        images.append(MPoly(k, terms))
    return P.substitute(images)


def divide_form(numerator: MPoly, divisor: MPoly) -> MPoly:
    """Exact quotient of homogeneous ternary forms; DivisionFailure if inexact."""
    if numerator.is_zero():
        return MPoly.zero(3)
    qdeg = numerator.degree() - divisor.degree()
    if qdeg < 0:
        raise DivisionFailure("degree of numerator below divisor")
    qmons = monomials_of_degree(3, qdeg)
    nmons = monomials_of_degree(3, numerator.degree())
    cols = []
    for m in qmons:
        prod = divisor * MPoly.monomial(3, m)
        cols.append([prod.terms.get(nm, CYC_ZERO) for nm in nmons])
    mat = ExactMatrix([[cols[j][i] for j in range(len(qmons))] for i in range(len(nmons))])
    rhs = [numerator.terms.get(nm, CYC_ZERO) for nm in nmons]
    sol = mat.solve(rhs)
    if sol is None:
        raise DivisionFailure("restriction is not divisible by the invariant quartic")
    return MPoly(3, {m: sol[k] for k, m in enumerate(qmons)})


def p2plus_factorization(system: SeptimicSystem | None = None) -> dict:
    """Restrict the system to the plane and split off the invariant quartic.

    Returns the quartic factor, the eight cubic cofactors, the dimension of
    their span, and whether the normalizer-invariant member restricts to zero
    (it must: the plane carries no invariant cubic).
    """
    if system is None:
        system = invariant_septimic_basis()
    quartic = invariant_quartic()
    cubics = []
    for P in system.basis:
        r = restrict_to_subspace(P, PLANE_BASIS)
        cubics.append(divide_form(r, quartic.form))
    mons = monomials_of_degree(3, 3)
    mat = ExactMatrix([[c.terms.get(m, CYC_ZERO) for m in mons] for c in cubics])
    span_dim = mat.rank()
    x7_restr = restrict_to_subspace(system.trivial_line, PLANE_BASIS)
    return {
        "klein_factor": quartic.form,
        "cubic_factors": cubics,
        "span_dim": span_dim,
        "x7_restriction_zero": x7_restr.is_zero(),
    }


@dataclass(frozen=True)
class KappaImagePoint:
    """Image coordinates split as (trivial-line value, 7 complement values)."""

    coords: tuple

    @property
    def trivial(self) -> complex:
        return self.coords[0]

    @property
    def w7_part(self) -> tuple:
        return self.coords[1:]


def kappa(system: SeptimicSystem, point) -> KappaImagePoint:
    """Evaluate the septimic system at a projective point off the base locus."""
    pt = np.asarray(point, dtype=complex)
    scale = float(np.max(np.abs(pt)))
    if scale == 0:
        raise BaseLocusPoint("zero vector")
    pt = pt / scale
    vals = [system.trivial_line.evaluate_complex(pt)] + [
        p.evaluate_complex(pt) for p in system.w7_part
    ]
    norms = [np.sqrt(sum(abs(c.to_complex()) ** 2 for c in p.terms.values()))
             for p in [system.trivial_line] + list(system.w7_part)]
    rel = max(abs(v) / n for v, n in zip(vals, norms))
    if rel < BASE_LOCUS_TOL:
        raise BaseLocusPoint("all septimics vanish to relative %.2e" % rel)
    return KappaImagePoint(tuple(vals))


def veronese_degree_check(system: SeptimicSystem | None = None, seed: int = 0) -> dict:
    """Degree of the induced plane map: intersection count of two pullback cubics."""
    from .plane_curves import common_zeros

    fact = p2plus_factorization(system)
    cubics = fact["cubic_factors"]
    rng = np.random.default_rng(seed)
    vecs = []
    for c in cubics:
        mons = monomials_of_degree(3, 3)
        vecs.append([c.terms.get(m, CYC_ZERO).to_complex() for m in mons])
    arr = np.array(vecs, dtype=complex)  # 8 x 10
    c1 = rng.normal(size=8) @ arr
    c2 = rng.normal(size=8) @ arr
    mons = monomials_of_degree(3, 3)
    f1 = {m: c1[k] for k, m in enumerate(mons)}
    f2 = {m: c2[k] for k, m in enumerate(mons)}
    pts = common_zeros(f1, f2, rng=rng)
    total = sum(mult for _, mult in pts)
    worst = 0.0
    for p, _ in pts:
        v1 = abs(_eval_dict(f1, p))
        v2 = abs(_eval_dict(f2, p))
        worst = max(worst, v1, v2)
    return {
        "map_rank": fact["span_dim"],
        "degree": total,
        "distinct_points": len(pts),
        "max_residual": worst,
    }


def _eval_dict(form, p):
    return sum(c * p[0] ** e[0] * p[1] ** e[1] * p[2] ** e[2] for e, c in form.items())

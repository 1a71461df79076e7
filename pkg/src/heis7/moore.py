"""The skew Moore matrix on the even 3-space, its minors and rank strata.

The working 3x4 matrix here is the restriction of the 7x7 skew-symmetric
Moore matrix M(x, y)[a][b] = y~_{4(a+b)} x~_{4(a-b)} (x~ the odd, y~ the even
index extension) to the even locus y4=y3, y5=y2, y6=y1, written in the
adapted basis and normalized so the (1,1) entry is x2*y2.

One literature misprint is corrected and documented: the widely printed form
of this matrix lacks the -x1*y3 term in entry (3,3).  Without it the matrix
is not equivariant under the restricted group action and its rank strata do
not close up into orbits; with it, equivariance is exact and the minimal
orbit lies entirely in the rank-1 stratum.  ``printed_literal_discrepancy``
exhibits the difference.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import EquivariantDimMismatch, NonFiniteLocus, OrbitSizeMismatch
from .exactcore import (
    CYC_ONE,
    CYC_ZERO,
    CycNum,
    ExactMatrix,
    MPoly,
    monomials_of_degree,
)
from . import heisenberg
from .apolarity import plane_group_action, space_group_action, _proj_key
from .plane_curves import common_zeros, eval_form, normalize_point, proj_distance

# entries as bilinear tables {(x-index 1..3, y-index 0..3): integer coeff}
MOORE_ENTRIES = (
    (((2, 2), 1),),
    (((3, 1), -1), ((1, 3), -1)),
    (((3, 0), 1),),
    (((2, 1), -1), ((1, 2), -1)),
    (((3, 3), -1),),
    (((3, 2), -1), ((2, 3), 1)),
    (((2, 1), -1), ((1, 2), 1)),
    (((1, 0), 1),),
    (((1, 1), -1),),
    (((2, 0), 1),),
    (((3, 1), 1), ((1, 3), -1)),
    (((3, 2), 1), ((2, 3), 1)),
)

# the as-printed literal: identical except entry (3,3) lacks the (1,3) term
PRINTED_ENTRIES = tuple(
    tuple(t for t in entry if not (k == 10 and t[0] == (1, 3)))
    for k, entry in enumerate(MOORE_ENTRIES)
)

MON3 = monomials_of_degree(3, 3)


@dataclass(frozen=True)
class StratumLabel:
    """Classification of a point of the even 3-space by minor-span dimension."""

    name: str  # generic | K6 | C18 | Z
    span_dim: int


def _entry_tables(entries):
    return [[dict(entries[r * 4 + c]) for c in range(4)] for r in range(3)]


_MOORE = _entry_tables(MOORE_ENTRIES)
_PRINTED = _entry_tables(PRINTED_ENTRIES)


def printed_literal_discrepancy():
    """Entry-wise difference (working matrix minus printed literal)."""
    diff = {}
    for r in range(3):
        for c in range(4):
            d = dict(_MOORE[r][c])
            for k, v in _PRINTED[r][c].items():
                d[k] = d.get(k, 0) - v
            d = {k: v for k, v in d.items() if v}
            if d:
                diff[(r + 1, c + 1)] = d
    return diff


def moore_eval(x, y, entries=None):
    """Evaluate the 3x4 matrix at x (3 coords) and y (4 coords).

    Exact (ExactMatrix) when all inputs are CycNum/int/rational, otherwise a
    complex numpy array.  Bilinear in (x, y).
    """
    table = _entry_tables(entries) if entries is not None else _MOORE
    exact = all(isinstance(c, (CycNum, int)) for c in list(x) + list(y))
    if exact:
        xv = [c if isinstance(c, CycNum) else CycNum.from_rat(c) for c in x]
        yv = [c if isinstance(c, CycNum) else CycNum.from_rat(c) for c in y]
        rows = []
        for r in range(3):
            row = []
            for c in range(4):
                v = CYC_ZERO
                for (i, j), cf in table[r][c].items():
                    v = v + xv[i - 1] * yv[j] * cf
                row.append(v)
            rows.append(row)
        return ExactMatrix(rows)
    xv = np.asarray(x, dtype=complex)
    yv = np.asarray(y, dtype=complex)
    out = np.zeros((3, 4), dtype=complex)
    for r in range(3):
        for c in range(4):
            out[r, c] = sum(cf * xv[i - 1] * yv[j] for (i, j), cf in table[r][c].items())
    return out


def _linear_forms(y, exact: bool):
    """Entries as x-linear forms: 3x4 grid of 3-vectors."""
    if exact:
        yv = [c if isinstance(c, CycNum) else CycNum.from_rat(c) for c in y]
        L = [[[CYC_ZERO] * 3 for _ in range(4)] for _ in range(3)]
        for r in range(3):
            for c in range(4):
                for (i, j), cf in _MOORE[r][c].items():
                    L[r][c][i - 1] = L[r][c][i - 1] + yv[j] * cf
        return L
    yv = np.asarray(y, dtype=complex)
    L = np.zeros((3, 4, 3), dtype=complex)
    for r in range(3):
        for c in range(4):
            for (i, j), cf in _MOORE[r][c].items():
                L[r, c, i - 1] += cf * yv[j]
    return L


def moore_minors(y):
    """The four 3x3 minors as cubic forms in x, plus their span dimension.

    Exact for exact y; numeric otherwise.  Returns (minors, span_dim) where
    each minor is a coefficient list over the 10 cubic monomials.
    """
    exact = all(isinstance(c, (CycNum, int)) for c in y)
    L = _linear_forms(y, exact)
    cubs = []
    for drop in range(4):
        cols = [c for c in range(4) if c != drop]
        if exact:
            cub = {}
            for perm in itertools.permutations(range(3)):
                sign = _perm_sign(perm)
                terms = {(0, 0, 0): CycNum.from_rat(sign)}
                for r in range(3):
                    lf = L[r][cols[perm[r]]]
                    nxt = {}
                    for e, cc in terms.items():
                        for m in range(3):
                            if not lf[m].is_zero():
                                ne = list(e)
                                ne[m] += 1
                                ne = tuple(ne)
                                s = nxt.get(ne, CYC_ZERO) + cc * lf[m]
                                nxt[ne] = s
                    terms = nxt
                for e, cc in terms.items():
                    cub[e] = cub.get(e, CYC_ZERO) + cc
            cubs.append([cub.get(m, CYC_ZERO) for m in MON3])
        else:
            cub = {}
            for perm in itertools.permutations(range(3)):
                sign = _perm_sign(perm)
                terms = {(0, 0, 0): complex(sign)}
                for r in range(3):
                    lf = L[r, cols[perm[r]]]
                    nxt = {}
                    for e, cc in terms.items():
                        for m in range(3):
                            if lf[m] != 0:
                                ne = list(e)
                                ne[m] += 1
                                ne = tuple(ne)
                                nxt[ne] = nxt.get(ne, 0) + cc * lf[m]
                    terms = nxt
                for e, cc in terms.items():
                    cub[e] = cub.get(e, 0) + cc
            cubs.append([cub.get(m, 0) for m in MON3])
    if exact:
        span = ExactMatrix(cubs).rank()
    else:
        arr = np.array(cubs)
        sv = np.linalg.svd(arr, compute_uv=False)
        span = int(np.sum(sv > 1e-8 * sv[0])) if sv[0] > 0 else 0
    return cubs, span


def span_dim(y) -> int:
    return moore_minors(y)[1]


def classify_stratum(y) -> StratumLabel:
    names = {4: "generic", 3: "K6", 2: "C18", 1: "Z"}
    d = span_dim(y)
    return StratumLabel(names.get(d, "degenerate"), d)


def apolar_points(y, rng=None, residual_tol: float = 1e-8):
    """The six common zeros of the minors for y in the generic stratum."""
    if rng is None:
        rng = np.random.default_rng(0)
    cubs, span = moore_minors(y)
    if span < 4:
        raise NonFiniteLocus("minor span dimension %d < 4" % span)
    num = [[complex(v.to_complex()) if isinstance(v, CycNum) else complex(v) for v in c]
           for c in cubs]
    forms = [{m: row[k] for k, m in enumerate(MON3) if row[k] != 0} for row in num]
    pts = common_zeros(forms[0], forms[1], rng=rng)
    scales = [np.linalg.norm(list(f.values())) for f in forms]
    out = []
    for p, mult in pts:
        res = max(abs(eval_form(forms[k], p)) / scales[k] for k in (2, 3))
        if res < residual_tol:
            out.extend([(p, mult, res)])
    return out


# ---------------------------------------------------------------------------
# the minimal orbit and the equivariance data
# ---------------------------------------------------------------------------


def _orbit_of(point, mats):
    def key(v):
        for c in v:
            if not c.is_zero():
                inv = c.inverse()
                return tuple(x * inv for x in v)
        raise ValueError("zero vector")

    seen = {key(point): point}
    frontier = [point]
    while frontier:
        nxt = []
        for p in frontier:
            for M in mats:
                q = tuple(M.apply(list(p)))
                k = key(q)
                if k not in seen:
                    seen[k] = q
                    nxt.append(q)
        frontier = nxt
    return list(seen.values())


def minimal_orbit_Z():
    """The 8-point minimal orbit on the even 3-space, exactly.

    Starts from the order-7 diagonal generator's eigenvector e0 and closes up
    under the restricted group.  The other eigenvectors generate 24-orbits.
    """
    act = space_group_action()
    e0 = (CYC_ONE, CYC_ZERO, CYC_ZERO, CYC_ZERO)
    orbit = _orbit_of(e0, [act["S"], act["V"]])
    if len(orbit) != 8:
        raise OrbitSizeMismatch("minimal orbit has %d points" % len(orbit))
    return orbit


def plane_symmetry_pairs():
    """Exact generator pairs (W on the plane side, U on the space side)."""
    pa = plane_group_action()
    sa = space_group_action()
    return [(pa["S"], sa["S"]), (pa["V"], sa["V"])]


def order3_symmetry():
    """An order-3 pair (W, U) from the generated group, for equivariance tests."""
    pa = plane_group_action()
    sa = space_group_action()
    words = [
        ("SV", (pa["S"] * pa["V"], sa["S"] * sa["V"])),
        ("SVV", (pa["S"] * pa["V"] * pa["V"], sa["S"] * sa["V"] * sa["V"])),
        ("VS", (pa["V"] * pa["S"], sa["V"] * sa["S"])),
    ]
    for name, (W, U) in words:
        cube = W * W * W
        if _proj_key(cube) == _proj_key(ExactMatrix.identity(3)):
            return W, U
    raise EquivariantDimMismatch("no order-3 word found among the candidates")


# ---------------------------------------------------------------------------
# the invariant net of quadrics and its jacobian curve
# ---------------------------------------------------------------------------


def net_of_quadrics():
    """The unique equivariant net: the injection of the plane module into
    symmetric squares of the space module, as three symmetric 4x4 matrices.

    The tensor transformation law T -> U T U^T paired with the plain plane
    action is the convention with a (unique) solution whose rank-2 locus is
    the degree-6 stratum curve; the contragredient/forms pairing produces a
    different invariant curve that does not carry the stratification.
    """
    pa = plane_group_action()
    sa = space_group_action()
    pairs10 = [(i, j) for i in range(4) for j in range(i, 4)]
    rows = []
    # unknowns: 3 symmetric 4x4 matrices, 30 slots
    # condition: sum_i W[i][j] Q_i = U Q_j U^T for j = 0..2
    for W, U in ((pa["S"], sa["S"]), (pa["V"], sa["V"])):
        for j in range(3):
            for a in range(4):
                for b in range(a, 4):
                    row = [CYC_ZERO] * 30
                    k = pairs10.index((a, b))
                    for i in range(3):
                        row[i * 10 + k] = row[i * 10 + k] + W.entry(i, j)
                    for p in range(4):
                        for q in range(4):
                            pq = (p, q) if p <= q else (q, p)
                            kk = pairs10.index(pq)
                            row[j * 10 + kk] = row[j * 10 + kk] - U.entry(a, p) * U.entry(b, q)
                    rows.append(row)
    kernel = ExactMatrix(rows).kernel_basis()
    if len(kernel) != 1:
        raise EquivariantDimMismatch("equivariant net space has dimension %d" % len(kernel))
    vec = kernel[0]
    quadrics = []
    for i in range(3):
        g = [[CYC_ZERO] * 4 for _ in range(4)]
        for k, (a, b) in enumerate(pairs10):
            v = vec[i * 10 + k]
            if a == b:
                g[a][a] = v
            else:
                half = v * CycNum.from_rat("1/2")
                g[a][b] = half
                g[b][a] = half
        quadrics.append(ExactMatrix(g))
    return quadrics


def jacobian_rank(quadrics, y) -> int:
    """Rank of [Q1 y | Q2 y | Q3 y]; 2 on the jacobian curve, 3 off it."""
    cols = [Q.to_complex() @ np.asarray(y, dtype=complex) for Q in quadrics]
    A = np.array(cols).T
    sv = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(sv > 1e-8 * sv[0]))


def jacobian_sample(n: int, seed: int = 0, quadrics=None):
    """Sample points of the degree-6 jacobian curve by random plane slices."""
    if quadrics is None:
        quadrics = net_of_quadrics()
    Q = [q.to_complex() for q in quadrics]
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < n:
        # slice: y = A u, u in P^2
        A = rng.normal(size=(4, 3)) + 1j * rng.normal(size=(4, 3))
        # minors of the 4x3 matrix [Q1 Au | Q2 Au | Q3 Au]: four cubics in u
        cubs = []
        for drop in range(4):
            keep = [r for r in range(4) if r != drop]
            cub = {}
            for perm in itertools.permutations(range(3)):
                sign = _perm_sign(perm)
                terms = {(0, 0, 0): complex(sign)}
                for rr in range(3):
                    lf = (Q[rr] @ A)[keep[perm[rr]], :]  # linear form in u
                    nxt = {}
                    for e, cc in terms.items():
                        for m in range(3):
                            if lf[m] != 0:
                                ne = list(e)
                                ne[m] += 1
                                ne = tuple(ne)
                                nxt[ne] = nxt.get(ne, 0) + cc * lf[m]
                    terms = nxt
                for e, cc in terms.items():
                    cub[e] = cub.get(e, 0) + cc
            cubs.append(cub)
        try:
            sols = common_zeros(cubs[0], cubs[1], rng=rng)
        except Exception:
            continue
        scale2 = np.linalg.norm(list(cubs[2].values()))
        scale3 = np.linalg.norm(list(cubs[3].values()))
        for p, mult in sols:
            r2 = abs(eval_form(cubs[2], p)) / scale2
            r3 = abs(eval_form(cubs[3], p)) / scale3
            if r2 < 1e-7 and r3 < 1e-7:
                y = A @ np.asarray(p)
                pts.append(normalize_point(y))
            if len(pts) >= n:
                break
    return pts[:n]


def _perm_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# the full skew matrix, its restriction, and the symmetric variant
# ---------------------------------------------------------------------------


def _fold_odd(i):
    i %= 7
    if i == 0:
        return None
    return (i, 1) if i <= 3 else (7 - i, -1)


def _fold_even(j):
    j %= 7
    return j if j <= 3 else 7 - j


def skew_moore_eval(x, y7):
    """The 7x7 skew matrix M[a][b] = y_{4(a+b)} x~_{4(a-b)} at numeric points.

    x has 3 coordinates (odd extension used), y7 has all 7 coordinates.
    """
    x = np.asarray(x, dtype=complex)
    y7 = np.asarray(y7, dtype=complex)
    xt = np.array([0, x[0], x[1], x[2], -x[2], -x[1], -x[0]])
    M = np.zeros((7, 7), dtype=complex)
    for a in range(7):
        for b in range(7):
            M[a, b] = y7[(4 * (a + b)) % 7] * xt[(4 * (a - b)) % 7]
    return M


def skew_restriction_block():
    """Symbolic 3x4 block of the skew matrix at even y, in the adapted basis,
    scaled and permuted onto the working matrix.

    Returns (block, transform) where block[r][c] are bilinear tables over
    ((x-index, y-index)) and transform records the exact row/column scalings.
    The assertion block == working-matrix is exercised by the test suite.
    """
    # adapted combinations of the 7 skew indices: rows f_r - f_{-r},
    # columns f_0 and f_s + f_{-s}
    rows = [[(r, 1), (7 - r, -1)] for r in (1, 2, 3)]
    cols = [[(0, 1)]] + [[(s, 1), (7 - s, 1)] for s in (1, 2, 3)]
    raw = [[{} for _ in range(4)] for _ in range(3)]
    for ri, rw in enumerate(rows):
        for ci, cl in enumerate(cols):
            e = {}
            for (a, sa) in rw:
                for (b, sb) in cl:
                    f = _fold_odd(4 * (a - b))
                    if f is None:
                        continue
                    key = (f[0], _fold_even(4 * (a + b)))
                    e[key] = e.get(key, 0) + sa * sb * f[1]
            raw[ri][ci] = {k: v for k, v in e.items() if v}
    # exact relation to the working matrix: row order (3,1,2), column order
    # (1,3,4,2), rank-one scaling rho x gamma
    row_perm = (2, 0, 1)
    col_perm = (0, 2, 3, 1)
    from fractions import Fraction

    rho = (Fraction(1), Fraction(-1), Fraction(1))
    gamma = (Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2))
    block = [[{} for _ in range(4)] for _ in range(3)]
    for r in range(3):
        for c in range(4):
            scale = rho[r] * gamma[c]
            src = raw[row_perm[r]][col_perm[c]]
            block[r][c] = {k: Fraction(v) * scale for k, v in src.items()}
    transform = {"row_perm": row_perm, "col_perm": col_perm, "rho": rho, "gamma": gamma}
    return block, transform


def skew_block_matches_working() -> bool:
    """Exact coefficient match of the scaled skew-restriction block."""
    block, _ = skew_restriction_block()
    for r in range(3):
        for c in range(4):
            want = {k: v for k, v in _MOORE[r][c].items()}
            got = {k: int(v) if v.denominator == 1 else v for k, v in block[r][c].items()}
            if {k: v for k, v in got.items() if v} != want:
                return False
    return True


def symmetric_moore_eval(x7, y):
    """The symmetric variant: 7x7 with M[a][b] = x_{4(a+b)} y~_{a-b}.

    x7 is a full 7-vector, y has the 4 even coordinates.  Its determinant is
    a degree-7 form in x7.
    """
    x7 = np.asarray(x7, dtype=complex)
    y = np.asarray(y, dtype=complex)
    M = np.zeros((7, 7), dtype=complex)
    for a in range(7):
        for b in range(7):
            M[a, b] = x7[(4 * (a + b)) % 7] * y[_fold_even(a - b)]
    return M


def _canonical_sl_lifts():
    """The 98 determinant-1 lifts of the extended group, as complex inverses."""
    gens = heisenberg.generators()
    sig = gens["sigma"].matrix.to_complex()
    tau = gens["tau"].matrix.to_complex()
    miota = heisenberg.minus_iota().matrix.to_complex()
    out = []
    si = np.eye(7, dtype=complex)
    for m in range(7):
        ti = np.eye(7, dtype=complex)
        for n in range(7):
            g = si @ ti
            out.append(np.linalg.inv(g))
            out.append(np.linalg.inv(g @ miota))
            ti = ti @ tau
        si = si @ sig
    return out


def symmetric_moore_vanishing(n_y: int = 5, seed: int = 0, septimic_system=None) -> dict:
    """The group-invariant part of det of the symmetric matrix vanishes.

    Averages det over the 98 determinant-1 lifts (Reynolds projection onto
    invariant septimics, exact in the limit) at sample points, and also
    least-squares fits the averaged values against the invariant basis.
    """
    rng = np.random.default_rng(seed)
    lifts = _canonical_sl_lifts()
    out = {"projection_norms": [], "fit_norms": []}
    basis_vals = None
    if septimic_system is not None:
        polys = [septimic_system.trivial_line] + list(septimic_system.w7_part)
    for _ in range(n_y):
        y = rng.normal(size=4) + 1j * rng.normal(size=4)
        xs = [rng.normal(size=7) + 1j * rng.normal(size=7) for _ in range(24)]
        scale = np.mean([abs(np.linalg.det(symmetric_moore_eval(x, y))) for x in xs])
        reyn = []
        for x in xs:
            val = 0j
            for ginv in lifts:
                val += np.linalg.det(symmetric_moore_eval(ginv @ x, y))
            reyn.append(val / len(lifts))
        proj = float(np.max(np.abs(reyn)) / scale)
        out["projection_norms"].append(proj)
        if septimic_system is not None:
            B = np.array([[p.evaluate_complex(x) for p in polys] for x in xs])
            coseffs, *_ = np.linalg.lstsq(B, np.array(reyn), rcond=None)
            out["fit_norms"].append(float(np.linalg.norm(B @ coseffs) / scale))
    out["max_projection_norm"] = max(out["projection_norms"])
    return out

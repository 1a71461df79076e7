"""Heptagon triplets, their span configurations, and the reducible surfaces.

Everything here is exact: the combinatorics run over Z_7, the quadrics are
written down with unit coefficients, and the plane-section types of the
pencil members are decided symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CounterexamplePair, DegenerateConfiguration
from .exactcore import CYC_ONE, CYC_ZERO, CycNum, ExactMatrix, MPoly
from .apolarity import PLANE_BASIS, SPACE_BASIS


@dataclass(frozen=True)
class Heptagon:
    """Closed cycle of seven coordinate lines e_k e_{k+1+i}."""

    index: int
    lines: tuple  # seven (a, b) vertex pairs, indices mod 7


@dataclass(frozen=True)
class SpanConfig:
    """The seven 3-spaces spanned by the index sets I_i^k."""

    index: int
    sets: tuple  # seven frozensets of four indices


def heptagon(i: int) -> Heptagon:
    if i not in (0, 1, 2):
        raise ValueError("heptagon index must be 0, 1 or 2")
    return Heptagon(i, tuple((k, (k + 1 + i) % 7) for k in range(7)))


def span_config(i: int) -> SpanConfig:
    if i not in (0, 1, 2):
        raise ValueError("configuration index must be 0, 1 or 2")
    sets = []
    for k in range(7):
        s = frozenset(
            x % 7 for x in (k + i + 1, k - i - 1, k + 3 * i + 3, k - 3 * i - 3)
        )
        if len(s) != 4:
            raise DegenerateConfiguration("index set collapsed for i=%d k=%d" % (i, k))
        sets.append(s)
    return SpanConfig(i, tuple(sets))


def bisecant_identity_check(i: int, spans=None) -> dict:
    """Every pair of distinct lines of E_i spans inside B_j + B_k.

    Disjoint pairs must have their four vertices equal to some I_j^m or
    I_k^m; pairs sharing a vertex span a plane contained in one of those
    3-spaces.  ``spans`` may override the two configurations (used by the
    negative-control test).
    """
    j, k = [x for x in (0, 1, 2) if x != i]
    if spans is None:
        spans = (span_config(j).sets, span_config(k).sets)
    allowed = [s for group in spans for s in group]
    hep = heptagon(i)
    checked = 0
    for a in range(7):
        for b in range(a + 1, 7):
            la, lb = hep.lines[a], hep.lines[b]
            verts = set(la) | set(lb)
            if len(verts) == 4:
                ok = any(verts == set(s) for s in allowed)
            else:
                ok = any(verts <= set(s) for s in allowed)
            if not ok:
                raise CounterexamplePair("lines %s, %s of E_%d" % (la, lb, i))
            checked += 1
    return {"pairs_checked": checked, "verdict": "pass"}


# ---------------------------------------------------------------------------
# sections with the fixed spaces
# ---------------------------------------------------------------------------


def _basis_vec(entries) -> list:
    return [CycNum.from_rat(v) for v in entries]


def _unit(k: int) -> list:
    return [CYC_ONE if i == k else CYC_ZERO for i in range(7)]


def line_space_intersection(a: int, b: int, basis) -> list:
    """Exact basis of span{e_a, e_b} (intersect) span(basis)."""
    ua, ub = _unit(a), _unit(b)
    vecs = [ua, ub] + [[-CycNum.from_rat(v) for v in w] for w in basis]
    mat = ExactMatrix([[vecs[r][c] for c in range(7)] for r in range(len(vecs))]).transpose()
    out = []
    for ker in mat.kernel_basis():
        s, t = ker[0], ker[1]
        vec = [s * x + t * y for x, y in zip(ua, ub)]
        out.append(vec)
    return out


def heptagon_plane_sections(i: int) -> dict:
    """Exact sections of E_i with the standard plane and 3-space.

    The scheme length at a heptagon vertex lying inside the 3-space is
    counted branch-wise: each of the two lines through it contributes one.
    """
    hep = heptagon(i)
    plane_points = []
    space_points = {}
    for (a, b) in hep.lines:
        for vec in line_space_intersection(a, b, PLANE_BASIS):
            plane_points.append((tuple(vec), 1))
        for vec in line_space_intersection(a, b, SPACE_BASIS):
            key = _proj_point_key(vec)
            if key in space_points:
                space_points[key] = (space_points[key][0], space_points[key][1] + 1)
            else:
                space_points[key] = (tuple(vec), 1)
    merged_plane = {}
    for vec, m in plane_points:
        key = _proj_point_key(list(vec))
        if key in merged_plane:
            merged_plane[key] = (merged_plane[key][0], merged_plane[key][1] + m)
        else:
            merged_plane[key] = (vec, m)
    plane = list(merged_plane.values())
    space = list(space_points.values())
    return {
        "plane_points": plane,
        "plane_length": sum(m for _, m in plane),
        "space_points": space,
        "space_length": sum(m for _, m in space),
    }


def _proj_point_key(vec):
    for c in vec:
        if not c.is_zero():
            inv = c.inverse()
            return tuple(x * inv for x in vec)
    raise ValueError("zero vector")


# ---------------------------------------------------------------------------
# the pencil of unions of seven quadrics
# ---------------------------------------------------------------------------

A1_POINT = (0, 0, 0, 1, -1, 0, 0)  # e3 - e4, the plane point of E_0
A3_POINT = (0, 0, 1, 0, 0, -1, 0)  # e2 - e5, the plane point of E_2


def seven_quadrics(a1=None, a3=None, t=(1, 1)) -> dict:
    """The invariant degree-14 union of quadrics through E_0 and E_2.

    In each 3-space of the middle span configuration the quadrics through
    the four heptagon lines form the pencil spanned by u_{k+1} u_{k+6} and
    u_{k+2} u_{k+5}; the same parameter t = (t0 : t1) is used in every
    3-space so the union is invariant.  Returns the seven quadrics, the
    plane-section scheme and its type.
    """
    if a1 is not None and not _proj_eq7(a1, A1_POINT):
        raise DegenerateConfiguration("a1 is not the plane point of the first heptagon")
    if a3 is not None and not _proj_eq7(a3, A3_POINT):
        raise DegenerateConfiguration("a3 is not the plane point of the third heptagon")
    t0 = t[0] if isinstance(t[0], CycNum) else CycNum.from_rat(Fraction(t[0]))
    t1 = t[1] if isinstance(t[1], CycNum) else CycNum.from_rat(Fraction(t[1]))
    if t0.is_zero() and t1.is_zero():
        raise DegenerateConfiguration("pencil parameter (0 : 0)")
    quadrics = []
    for k in range(7):
        e1 = [0] * 7
        e1[(k + 1) % 7] += 1
        e1[(k + 6) % 7] += 1
        e2 = [0] * 7
        e2[(k + 2) % 7] += 1
        e2[(k + 5) % 7] += 1
        q = MPoly(7, {tuple(e1): t0, tuple(e2): t1})
        quadrics.append(q)

    # plane section: contributions computed exactly (see the derivation in
    # the tests): spans k=2,5 give the doubled point a1, spans k=3,4 the
    # doubled point a3, and span k=0 cuts the binary quadric
    # -(t0 s^2 + t1 r^2) on the line spanned by (e1-e6), (e2-e5).
    section = [(A1_POINT, 2), (A3_POINT, 2)]
    if t1.is_zero():
        # the line contribution degenerates onto a3, doubled: type (4, 2)
        section.append((A3_POINT, 2))
        stype = (4, 2)
        description = "seven planes doubled along the middle configuration"
    elif t0.is_zero():
        section.append(((0, 1, 0, 0, 0, 0, -1), 2))  # e1 - e6 doubled
        stype = (2, 2, 2)
        description = "union of the fourteen planes"
    else:
        ratio = -(t1 * t0.inverse())
        section.append((("line", ratio), 1))
        section.append((("line", ratio), 1))
        stype = (2, 2, 1, 1)
        description = "generic union of seven quadrics"
    return {
        "quadrics": quadrics,
        "section": section,
        "type": stype,
        "description": description,
    }


def _proj_eq7(v, w) -> bool:
    vv = [c if isinstance(c, CycNum) else CycNum.from_rat(c) for c in v]
    ww = [c if isinstance(c, CycNum) else CycNum.from_rat(c) for c in w]
    try:
        return _proj_point_key(vv) == _proj_point_key(ww)
    except ValueError:
        return False


def quadric_contains_lines(k: int, q: MPoly) -> bool:
    """The pencil member in span k vanishes on its four heptagon lines."""
    pairs = [
        ((k + 1) % 7, (k + 2) % 7),  # side of E_0
        ((k + 5) % 7, (k + 6) % 7),  # opposite side of E_0
        ((k + 5) % 7, (k + 1) % 7),  # transversal from E_2
        ((k + 6) % 7, (k + 2) % 7),  # transversal from E_2
    ]
    for (a, b) in pairs:
        # restrict to s e_a + t e_b: all monomials must vanish
        for exps, c in q.terms.items():
            support = {i for i, e in enumerate(exps) if e}
            if support <= {a, b} and not c.is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# the nilpotent-deformation identities
# ---------------------------------------------------------------------------

# variable order for the epsilon ring: (x, y, z, eps, alpha, beta)
_X, _Y, _Z, _EPS, _AL, _BE = (MPoly.variable(6, i) for i in range(6))


def _drop_eps_squared(P: MPoly) -> MPoly:
    return MPoly(6, {e: c for e, c in P.terms.items() if e[3] <= 1})


def epsilon_identity_check() -> dict:
    """Exact expansions over the ring with eps^2 = 0.

    Checks the three-fold difference identity and the two-parameter family,
    whose expansion is 8 a^3 b eps (z^3 x + x^3 y + y^3 z); both boundary
    parameter values kill the expression, which records the two stated
    degenerations.
    """
    x, y, z, eps, al, be = _X, _Y, _Z, _EPS, _AL, _BE
    klein = z ** 3 * x + x ** 3 * y + y ** 3 * z

    lhs = _drop_eps_squared((z + eps * x) ** 4) - z ** 4 \
        + _drop_eps_squared((x + eps * y) ** 4) - x ** 4 \
        + _drop_eps_squared((y + eps * z) ** 4) - y ** 4
    simple_ok = lhs == eps * klein * 4

    fam = _drop_eps_squared(eps * (be * x + al * z) ** 4) \
        - _drop_eps_squared(eps * (be * x - al * z) ** 4) \
        - (_drop_eps_squared((x + eps * (be ** 2 * z - al ** 2 * y)) ** 4) - x ** 4) * al * be * 2 \
        + (_drop_eps_squared((y + eps * z) ** 4) - y ** 4) * al ** 3 * be * 2
    fam = _drop_eps_squared(fam)
    family_ok = fam == eps * klein * al ** 3 * be * 8

    # boundary degenerations: the expression vanishes at alpha = 0 and beta = 0
    at_alpha0 = fam.substitute([x, y, z, eps, MPoly.zero(6), be])
    at_beta0 = fam.substitute([x, y, z, eps, al, MPoly.zero(6)])
    return {
        "simple_identity": simple_ok,
        "family_identity": family_ok,
        "alpha0_vanishes": at_alpha0.is_zero(),
        "beta0_vanishes": at_beta0.is_zero(),
    }

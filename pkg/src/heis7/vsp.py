"""Power-sum decompositions of a plane quartic and the boundary strata.

All constructions here are complex-floating with explicit residual
certificates.  The central object is the antipolar pairing
r(x, l) = m(x)^T B^-1 m(l): a six-tuple of dual-plane points is a power-sum
decomposition exactly when the pairing vanishes on all fifteen pairs, and a
decomposition through a fixed point a is forced once a partner on the
antipolar conic of a is chosen: the remaining four points are the
intersection of the two conics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .apolarity import (
    Catalecticant,
    PlaneQuartic,
    catalecticant,
    dual_quartic,
    singular_locus_sextic,
)
from .errors import (
    AmbiguousClustering,
    BranchExhausted,
    CommonComponent,
    IllConditioned,
    RankNot3,
    SingularCatalecticant,
)
from .plane_curves import (
    ConicParam,
    binary_restriction,
    binary_roots,
    cluster_projective_points,
    cluster_values,
    common_zeros,
    compose_linear,
    conic_form,
    eval_form,
    line_points,
    min_intercluster_gap,
    mpoly_to_dict,
    normalize_point,
    partial_form,
    point_on_conic,
    proj_distance,
    split_degenerate_conic,
)

ANTIPOLAR_TOL = 1e-9
POWER_SUM_TOL = 1e-8
CLUSTER_TOL = 1e-5
AMBIG_BAND = 1e-3
CONIC_SING_TOL = 1e-7
TRIPLE_TOL = 1e-7


@dataclass
class PowerSumDecomp:
    """Six dual-plane points with coefficients writing F as a sum of 4th powers."""

    lines: list
    coefficients: np.ndarray
    residual: float
    antipolar_residuals: np.ndarray = field(default=None, repr=False)

    def max_antipolar_residual(self) -> float:
        return float(np.max(self.antipolar_residuals))


@dataclass
class PointScheme:
    """Clustered plane points with multiplicities and the partition they form."""

    points: list  # [(point, multiplicity)]
    type: tuple  # partition of the total length, descending


class WaringEngine:
    """Numeric apolarity engine for a quartic with nonsingular catalecticant."""

    def __init__(self, F: PlaneQuartic, cat: Catalecticant | None = None):
        self.F = F
        self.cat = cat if cat is not None else catalecticant(F)
        if self.cat.rank != 6:
            raise SingularCatalecticant("catalecticant rank %d" % self.cat.rank)
        self.B = self.cat.matrix.to_complex()
        self.Binv = np.linalg.inv(self.B)
        self.binv_scale = np.linalg.norm(self.Binv, 2)
        self.Fdict = mpoly_to_dict(F.form)
        self.dual = dual_quartic(F, self.cat)
        self.dual_dict = mpoly_to_dict(self.dual.form)
        self.hf = singular_locus_sextic(F, self.cat)
        self.hf_dict = mpoly_to_dict(self.hf)

    # -- pairing and conics ---------------------------------------------

    @staticmethod
    def _mvec(p):
        x, y, z = p
        return np.array([x * x, y * y, z * z, x * y, x * z, y * z], dtype=complex)

    def pair(self, x, l) -> complex:
        return complex(self._mvec(x) @ self.Binv @ self._mvec(l))

    def pair_residual(self, x, l) -> float:
        x = normalize_point(x)
        l = normalize_point(l)
        mx, ml = self._mvec(x), self._mvec(l)
        denom = np.linalg.norm(mx) * np.linalg.norm(ml) * self.binv_scale
        return float(abs(mx @ self.Binv @ ml) / denom)

    def conic_gram(self, l) -> np.ndarray:
        h = self.Binv @ self._mvec(normalize_point(l))
        G = np.array(
            [
                [h[0], h[3] / 2, h[4] / 2],
                [h[3] / 2, h[1], h[5] / 2],
                [h[4] / 2, h[5] / 2, h[2]],
            ],
            dtype=complex,
        )
        return G / np.linalg.norm(G)

    def conic_is_singular(self, l, tol: float = CONIC_SING_TOL) -> bool:
        s = np.linalg.svd(self.conic_gram(l), compute_uv=False)
        return s[2] < tol * s[0]

    def on_dual_quartic(self, l) -> float:
        l = normalize_point(l)
        return abs(eval_form(self.dual_dict, l)) / _form_scale(self.dual_dict)

    def on_hessian(self, l) -> float:
        l = normalize_point(l)
        return abs(eval_form(self.hf_dict, l)) / _form_scale(self.hf_dict)

    # -- sampling points on the boundary curves --------------------------

    def sample_dual_quartic(self, rng, avoid_hessian: bool = True, tries: int = 60):
        """Random point of the dual quartic, optionally away from the sextic."""
        for _ in range(tries):
            a = rng.normal(size=3) + 1j * rng.normal(size=3)
            b = rng.normal(size=3) + 1j * rng.normal(size=3)
            roots = binary_roots(binary_restriction(self.dual_dict, a, b))
            for s, t in roots:
                p = normalize_point(s * a + t * b)
                if avoid_hessian and self.on_hessian(p) < 1e-2:
                    continue
                return p
        raise IllConditioned("no suitable point found on the dual quartic")

    def hessian_intersection(self, rng):
        """The intersection points of the dual quartic with the sextic."""
        pts = common_zeros(self.dual_dict, self.hf_dict, rng=rng)
        return [p for p, _ in pts]


def _form_scale(f: dict) -> float:
    return float(np.linalg.norm(list(f.values())))


# ---------------------------------------------------------------------------
# conic intersection
# ---------------------------------------------------------------------------


def conic_intersect(G1, G2, cluster_tol: float = 1e-6):
    """The four intersection points (with multiplicity) of two plane conics.

    Uses the singular member of the pencil, splits it into lines, and
    intersects the lines with one conic.  Raises CommonComponent when the
    conics share a line or coincide.
    """
    G1 = np.asarray(G1, dtype=complex)
    G2 = np.asarray(G2, dtype=complex)
    G1 = G1 / np.linalg.norm(G1)
    G2 = G2 / np.linalg.norm(G2)
    if np.linalg.norm(G1 - np.trace(G1.conj().T @ G2) * G2) < 1e-10:
        raise CommonComponent("conics coincide")
    # characteristic cubic det(s G1 + t G2) via interpolation
    ts = np.array([0.0, 1.0, -1.0, 2.0])
    vals = [np.linalg.det(G1 + t * G2) for t in ts]
    V = np.vander(ts, 4, increasing=True)
    cubic = np.linalg.solve(V, vals)  # c0 + c1 t + c2 t^2 + c3 t^3
    coeffs = cubic[::-1]
    lead = 0
    while lead < 3 and abs(coeffs[lead]) < 1e-12:
        lead += 1
    roots = list(np.roots(coeffs[lead:])) if lead < 3 else []
    if lead > 0:
        # t = infinity root: G2 itself singular; use it
        roots.append(None)
    if not roots:
        raise IllConditioned("no singular member found in the pencil")
    last_err = None
    for r in sorted(roots, key=lambda t: abs(t) if t is not None else np.inf):
        D = G2 if r is None else G1 + r * G2
        try:
            l1, l2 = split_degenerate_conic(D / np.linalg.norm(D), tol=1e-6)
        except IllConditioned as e:
            last_err = e
            continue
        other = conic_form(G1)
        pts = []
        for line in (l1, l2):
            p, q = line_points(line)
            coeffs2 = binary_restriction(other, p, q)
            if np.max(np.abs(coeffs2)) < 1e-12:
                raise CommonComponent("a pencil line lies inside both conics")
            for s, t in binary_roots(coeffs2):
                pts.append(normalize_point(s * p + t * q))
        if len(pts) != 4:
            last_err = IllConditioned("expected 4 intersection points, got %d" % len(pts))
            continue
        pts = [_polish_on_conics(G1, G2, p) for p in pts]
        clusters = cluster_projective_points(pts, cluster_tol)
        return [(p, m) for p, m in clusters]
    raise last_err if last_err else IllConditioned("conic intersection failed")


def _polish_on_conics(G1, G2, p, iters: int = 6):
    """Gauss-Newton polish of a common point of two conics."""
    p = normalize_point(p)
    for _ in range(iters):
        f = np.array([p @ G1 @ p, p @ G2 @ p])
        J = np.vstack([2 * (G1 @ p), 2 * (G2 @ p)])
        # project out the direction of p itself (projective gauge)
        step, *_ = np.linalg.lstsq(J, -f, rcond=None)
        step = step - (np.vdot(p, step)) * p
        p = normalize_point(p + step)
        if np.linalg.norm(f) < 1e-15:
            break
    return p


# ---------------------------------------------------------------------------
# power-sum decompositions
# ---------------------------------------------------------------------------


def _quartic_power_matrix(lines):
    """Columns are coefficient vectors of (l . x)^4 over the 15 quartic monomials."""
    from .exactcore import monomials_of_degree
    from math import factorial

    mons = monomials_of_degree(3, 4)
    cols = []
    for l in lines:
        col = []
        for m in mons:
            mult = factorial(4) // (factorial(m[0]) * factorial(m[1]) * factorial(m[2]))
            col.append(mult * l[0] ** m[0] * l[1] ** m[1] * l[2] ** m[2])
        cols.append(col)
    return np.array(cols, dtype=complex).T, mons


def power_sum_residual(engine: WaringEngine, lines):
    """Least-squares fit of F by fourth powers of the given lines."""
    A, mons = _quartic_power_matrix(lines)
    b = np.array([engine.F.form.terms.get(m, None) for m in mons], dtype=object)
    b = np.array([0j if c is None else c.to_complex() for c in b])
    coeffs, *_ = np.linalg.lstsq(A, b, rcond=None)
    resid = np.linalg.norm(A @ coeffs - b) / np.linalg.norm(b)
    return coeffs, float(resid)


def vsp_sample(F, seed=0, start_line=None, attempts: int = 12) -> PowerSumDecomp:
    """Seeded greedy construction of a point of VSP(F, 6).

    Picks l1 (random or given), l2 randomly on the antipolar conic of l1;
    the other four points are forced as the intersection of the two conics.
    Branches with degenerate conics or ill-conditioned intersections are
    retried; the witness chain of failed branches is reported on exhaustion.
    """
    engine = F if isinstance(F, WaringEngine) else WaringEngine(F)
    rng = np.random.default_rng(seed)
    witness = []
    for attempt in range(attempts):
        if start_line is not None and attempt == 0:
            l1 = normalize_point(start_line)
        else:
            l1 = normalize_point(rng.normal(size=3) + 1j * rng.normal(size=3))
        if engine.conic_is_singular(l1):
            witness.append("branch %d: antipolar conic of l1 singular" % attempt)
            continue
        G1 = engine.conic_gram(l1)
        try:
            base = point_on_conic(G1, rng)
            par = ConicParam(G1, base)
            t = rng.normal() + 1j * rng.normal()
            l2 = par.point(t)
            if engine.conic_is_singular(l2) or proj_distance(l1, l2) < 1e-3:
                witness.append("branch %d: bad second line" % attempt)
                continue
            G2 = engine.conic_gram(l2)
            four = conic_intersect(G1, G2)
        except (IllConditioned, CommonComponent) as e:
            witness.append("branch %d: %s" % (attempt, e))
            continue
        if sum(m for _, m in four) != 4 or len(four) != 4:
            witness.append("branch %d: intersection not reduced" % attempt)
            continue
        lines = [l1, l2] + [p for p, _ in four]
        res = np.zeros((6, 6))
        for i, j in combinations(range(6), 2):
            res[i, j] = res[j, i] = engine.pair_residual(lines[i], lines[j])
        coeffs, resid = power_sum_residual(engine, lines)
        if res.max() < ANTIPOLAR_TOL and resid < POWER_SUM_TOL:
            return PowerSumDecomp(
                lines=lines, coefficients=coeffs, residual=resid, antipolar_residuals=res
            )
        witness.append(
            "branch %d: residuals %.2e / %.2e over tolerance" % (attempt, res.max(), resid)
        )
    raise BranchExhausted("; ".join(witness))


# ---------------------------------------------------------------------------
# scheme types
# ---------------------------------------------------------------------------


def scheme_type(points, tol: float = CLUSTER_TOL, ambig_band: float = AMBIG_BAND) -> PointScheme:
    """Cluster approximate plane points into a scheme type.

    Tolerance is relative to the configuration diameter.  If the smallest
    distance between distinct clusters falls below the ambiguity band the
    classification is refused rather than silently resolved.
    """
    pts = [normalize_point(p) for p in points]
    diam = max(
        (proj_distance(a, b) for a, b in combinations(pts, 2)),
        default=0.0,
    )
    if diam == 0.0:
        return PointScheme(points=[(pts[0], len(pts))], type=(len(pts),))
    clusters = cluster_projective_points(pts, tol * diam)
    gap = min_intercluster_gap(pts, clusters)
    if gap is not None and gap < ambig_band * diam:
        raise AmbiguousClustering(
            "intercluster gap %.2e inside ambiguity band (diam %.2e)" % (gap, diam)
        )
    parts = tuple(sorted((m for _, m in clusters), reverse=True))
    return PointScheme(points=clusters, type=parts)


# ---------------------------------------------------------------------------
# the pencil of decompositions through a boundary point
# ---------------------------------------------------------------------------


def intersect_on_param(par: ConicParam, G2, G1=None):
    """Points of the parametrized conic lying on the conic with gram G2.

    Restriction to the parametrization is a binary quartic; this stays stable
    even when the two conics nearly coincide, where the pencil method fails.
    """
    q = par.restrict(conic_form(G2))
    pts = [par.point(s, t) for s, t in binary_roots(q)]
    if G1 is not None:
        pts = [_polish_on_conics(G1, G2, p) for p in pts]
    return pts


def decomposition_through(engine: WaringEngine, a, lprime, par: ConicParam | None = None):
    """The six lines {a, l'} + (C_a o C_l'); valid for l' on the conic of a."""
    G1 = engine.conic_gram(a)
    if par is None:
        par = ConicParam(G1, normalize_point(a))  # requires a on its own conic
    G2 = engine.conic_gram(lprime)
    pts = intersect_on_param(par, G2, G1)
    if len(pts) != 4:
        raise IllConditioned("conic intersection returned %d points" % len(pts))
    return [normalize_point(a), normalize_point(lprime)] + pts


def boundary_pencil(engine: WaringEngine, a, seed: int = 0, n_generic: int = 7) -> dict:
    """Census of scheme types along the pencil of decompositions through a.

    Returns {"samples": [(parameter, type)], "census": {type: count},
    "special": [...]} where special parameter values are found by root
    finding, not sampling.
    """
    rng = np.random.default_rng(seed)
    a = normalize_point(a)
    if engine.on_dual_quartic(a) > 1e-7:
        raise IllConditioned("point is not on the dual quartic")
    if not engine.conic_is_singular(a):
        return _pencil_smooth(engine, a, rng, n_generic)
    return _pencil_hessian(engine, a, rng, n_generic)


def _type_of(engine, a, lprime, par=None):
    return scheme_type(decomposition_through(engine, a, lprime, par)).type


def _pencil_smooth(engine, a, rng, n_generic):
    G = engine.conic_gram(a)
    par = ConicParam(G, a)  # a lies on its own conic
    samples = []
    census = {}
    for _ in range(n_generic):
        t = rng.normal() + 1j * rng.normal()
        lp = par.point(t)
        if proj_distance(lp, a) < 1e-3:
            continue
        ty = _type_of(engine, a, lp, par)
        samples.append((complex(t), ty))
        census[ty] = census.get(ty, 0) + 1
    special = []
    # l' -> a gives the unique triple point
    (s_a, t_a) = par.base_parameters()[0]

    def near_a(eps):
        return par.point(s_a + eps, t_a + eps * 1j)

    ty, wit = limit_partition(lambda e: decomposition_through(engine, a, near_a(e), par))
    special.append(("l'->a", ty))
    census[ty] = census.get(ty, 0) + 1
    # l' on the dual quartic: 8 roots, a doubly, six others in three pairs
    coeffs = par.restrict(engine.dual_dict)
    roots = binary_roots(coeffs)
    others = []
    for s, t in roots:
        p = par.point(s, t)
        if proj_distance(p, a) > 1e-4:
            others.append(p)
    schemes = []
    for p in others:
        lines = decomposition_through(engine, a, p, par)
        sch = scheme_type(lines)
        schemes.append((p, sch))
    # deduplicate coincident schemes (each appears twice along the pencil)
    reps = []
    for p, sch in schemes:
        dup = False
        for q, sch2 in reps:
            if _same_scheme(sch, sch2):
                dup = True
                break
        if not dup:
            reps.append((p, sch))
    for p, sch in reps:
        special.append(("l' on dual quartic", sch.type))
        census[sch.type] = census.get(sch.type, 0) + 1
    return {"samples": samples, "census": census, "special": special,
            "n_quartic_parameters": len(others), "n_distinct_quartic_schemes": len(reps)}


def _same_scheme(s1: PointScheme, s2: PointScheme, tol: float = 1e-4) -> bool:
    if s1.type != s2.type:
        return False
    for p, m in s1.points:
        if not any(m == m2 and proj_distance(p, q) < tol for q, m2 in s2.points):
            return False
    return True


def hessian_triplet(engine: WaringEngine, a1, hessian_pts=None, rng=None):
    """The mu_3 triplet (a1, a2, a3): vertex of the split conic and the third
    intersection point on the far line."""
    if rng is None:
        rng = np.random.default_rng(0)
    G = engine.conic_gram(a1)
    l1, l2 = split_degenerate_conic(G)
    # vertex = intersection of the two lines
    a2 = normalize_point(np.cross(l1, l2))
    # identify the line not through a1
    d1 = abs(np.dot(l1, normalize_point(a1)))
    far = l2 if d1 < abs(np.dot(l2, normalize_point(a1))) else l1
    p, q = line_points(far)
    roots = binary_roots(binary_restriction(engine.dual_dict, p, q))
    cands = []
    for s, t in roots:
        pt = normalize_point(s * p + t * q)
        if proj_distance(pt, a2) < 1e-6:
            continue
        cands.append((engine.on_hessian(pt), pt))
    cands.sort(key=lambda c: c[0])
    if not cands or cands[0][0] > 1e-6:
        raise IllConditioned("no third triplet point found on the far line")
    return normalize_point(a1), a2, cands[0][1]


def _decomposition_on_line_pair(engine, a1, b, lines):
    """Decomposition through a1 when its conic is a line pair: the four forced
    points come from restricting the conic of b to the two lines."""
    f2 = conic_form(engine.conic_gram(b))
    pts = []
    for line in lines:
        p, q = line_points(line)
        for s, t in binary_roots(binary_restriction(f2, p, q)):
            pts.append(normalize_point(s * p + t * q))
    if len(pts) != 4:
        raise IllConditioned("line-pair intersection returned %d points" % len(pts))
    return [normalize_point(a1), normalize_point(b)] + pts


def _pencil_hessian(engine, a1, rng, n_generic):
    a1, a2, a3 = hessian_triplet(engine, a1, rng=rng)
    G = engine.conic_gram(a1)
    lines = split_degenerate_conic(G)
    samples = []
    census = {}
    direction = a2  # the line through a1 also passes the vertex a2

    def moving_point(t):
        return normalize_point(a1 + t * direction)

    def type_at(b):
        return scheme_type(_decomposition_on_line_pair(engine, a1, b, lines)).type

    for _ in range(n_generic):
        t = rng.normal() + 1j * rng.normal()
        b = moving_point(t)
        ty = type_at(b)
        samples.append((complex(t), ty))
        census[ty] = census.get(ty, 0) + 1
    special = []
    for label, family in (
        ("b->a1", lambda e: moving_point(e)),
        ("b->a2", lambda e: moving_point(1.0 / e)),
    ):
        ty, wit = limit_partition(
            lambda e: _decomposition_on_line_pair(engine, a1, family(e), lines)
        )
        special.append((label, ty))
        census[ty] = census.get(ty, 0) + 1
    return {"samples": samples, "census": census, "special": special,
            "triplet": (a1, a2, a3)}


def limit_partition(family, eps_list=(1e-3, 2e-4, 4e-5), scale: float = 20.0):
    """Scheme type of a degenerating six-point family, by limit tracking.

    Clusters each configuration at a tolerance proportional to the family
    parameter and demands a stable partition with shrinking cluster
    diameters; this certifies the limit type without pushing root-finding
    into its sqrt-noise regime.
    """
    partitions = []
    diameters = []
    for eps in eps_list:
        dec = family(eps)
        clusters = cluster_projective_points(dec, scale * eps)
        parts = tuple(sorted((m for _, m in clusters), reverse=True))
        partitions.append(parts)
        worst = 0.0
        for c, m in clusters:
            if m > 1:
                members = [p for p in dec if proj_distance(p, c) <= scale * eps]
                for x, y in combinations(members, 2):
                    worst = max(worst, proj_distance(x, y))
        diameters.append(worst)
    if len(set(partitions)) != 1:
        raise IllConditioned("limit partition unstable: %s" % (partitions,))
    for d1, d2 in zip(diameters, diameters[1:]):
        if d1 > 0 and d2 > d1 / 3.0:
            raise IllConditioned("cluster diameters not shrinking: %s" % (diameters,))
    return partitions[0], {"eps": list(eps_list), "diameters": diameters}


# ---------------------------------------------------------------------------
# the theta-triple of a quartic point and related pencil structure
# ---------------------------------------------------------------------------


def base_point_multiplicity(engine: WaringEngine, a, tol: float = 1e-4) -> int:
    """Multiplicity of a inside (conic of a) o (dual quartic)."""
    par = ConicParam(engine.conic_gram(a), normalize_point(a))
    roots = binary_roots(par.restrict(engine.dual_dict))
    count = 0
    for s, t in roots:
        if proj_distance(par.point(s, t), a) < tol:
            count += 1
    return count


def mutual_antipolarity_check(engine: WaringEngine, a, rng=None) -> dict:
    """Extract the triple (x1, x2, x3) where the hessian triangle of a is
    tangent to the dual quartic, and verify their pairwise antipolarity."""
    if rng is None:
        rng = np.random.default_rng(0)
    a = normalize_point(a)
    # polar cubic of a with respect to the quartic in a's own plane
    cubic = {}
    for i in range(3):
        for e, c in partial_form(engine.dual_dict, i).items():
            cubic[e] = cubic.get(e, 0) + a[i] * c
    T = _hessian_det_numeric(cubic)
    pts = common_zeros(T, engine.dual_dict, rng=rng, cluster_tol=3e-4)
    doubles = [p for p, m in pts if m >= 2]
    if len(doubles) != 3:
        raise IllConditioned(
            "tangency extraction found %d double points (multiplicities %s)"
            % (len(doubles), sorted(m for _, m in pts))
        )
    res = {}
    worst = 0.0
    for i, j in combinations(range(3), 2):
        r = engine.pair_residual(doubles[i], doubles[j])
        res[(i, j)] = r
        worst = max(worst, r)
    return {
        "triple": doubles,
        "pairwise_residuals": res,
        "max_residual": worst,
        "base_multiplicity": base_point_multiplicity(engine, a),
        "triangle": T,
    }


def _hessian_det_numeric(cubic: dict) -> dict:
    h = [[None] * 3 for _ in range(3)]
    for i in range(3):
        di = partial_form(cubic, i)
        for j in range(3):
            h[i][j] = partial_form(di, j)
    def mul(f, g):
        out = {}
        for e1, c1 in f.items():
            for e2, c2 in g.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return out
    def sub(f, g):
        out = dict(f)
        for e, c in g.items():
            out[e] = out.get(e, 0) - c
        return {e: c for e, c in out.items() if c != 0}
    m00 = sub(mul(h[1][1], h[2][2]), mul(h[1][2], h[2][1]))
    m01 = sub(mul(h[1][0], h[2][2]), mul(h[1][2], h[2][0]))
    m02 = sub(mul(h[1][0], h[2][1]), mul(h[1][1], h[2][0]))
    out = sub(sub(mul(h[0][0], m00), mul(h[0][1], m01)), mul(mul(h[0][2], m02), {(0, 0, 0): -1}))
    return out


# ---------------------------------------------------------------------------
# degree-5 divisor pencils on an antipolar conic
# ---------------------------------------------------------------------------


def quintic_pencil_check(engine: WaringEngine, l, seed: int = 0, n_samples: int = 12) -> dict:
    """The divisors l' + (C_l o C_l') on the conic of l span a projective line.

    Builds the 12 x 6 matrix of binary quintic coefficient vectors and reports
    its singular values; rank must be exactly 2.  When l is on the dual
    quartic every divisor contains the parameter of l (a base point).
    """
    rng = np.random.default_rng(seed)
    G = engine.conic_gram(l)
    if engine.conic_is_singular(l):
        raise IllConditioned("antipolar conic of l is singular")
    base = point_on_conic(G, rng)
    par = ConicParam(G, base)
    rows = []
    quintics = []
    count = 0
    guard = 0
    while count < n_samples and guard < 4 * n_samples:
        guard += 1
        t = rng.normal() + 1j * rng.normal()
        lp = par.point(t)
        if engine.conic_is_singular(lp):
            continue
        try:
            four = conic_intersect(G, engine.conic_gram(lp))
        except (IllConditioned, CommonComponent):
            continue
        params = [par.parameter_of(lp)]
        for p, m in four:
            params.extend([par.parameter_of(p)] * m)
        if len(params) != 5:
            continue
        coeffs = np.array([1.0 + 0j])
        for s, t2 in params:
            coeffs = np.convolve(coeffs, np.array([t2, -s]))
        coeffs = coeffs / np.linalg.norm(coeffs)
        rows.append(coeffs)
        quintics.append((params, coeffs))
        count += 1
    if count < n_samples:
        raise IllConditioned("could not draw %d pencil samples" % n_samples)
    M = np.array(rows)
    sv = np.linalg.svd(M, compute_uv=False)
    rank = int(np.sum(sv > 1e-7 * sv[0]))
    out = {"singular_values": sv, "rank": rank}
    if engine.on_dual_quartic(l) < 1e-9:
        s0, t0 = par.parameter_of(normalize_point(l))
        vals = [abs(_binary_eval(c, s0, t0)) for _, c in quintics]
        out["base_point_values"] = vals
    return out


def _binary_eval(coeffs, s, t):
    d = len(coeffs) - 1
    return sum(c * s ** (d - k) * t ** k for k, c in enumerate(coeffs))


# ---------------------------------------------------------------------------
# the Grassmannian image and the quadric cones
# ---------------------------------------------------------------------------


def _pf_projection(engine: WaringEngine):
    """Orthonormal basis of the 7-dimensional cokernel of w -> d_w F."""
    from .exactcore import monomials_of_degree

    mons = monomials_of_degree(3, 3)
    cols = []
    for i in range(3):
        d = partial_form(engine.Fdict, i)
        cols.append([d.get(m, 0) for m in mons])
    D = np.array(cols, dtype=complex).T  # 10 x 3
    Q, _ = np.linalg.qr(np.hstack([D, np.eye(10, dtype=complex)]))
    return Q[:, 3:10].conj().T, mons  # 7 x 10 projection


def _cube_vector(l, mons):
    return np.array(
        [
            _multinom3(m) * l[0] ** m[0] * l[1] ** m[1] * l[2] ** m[2]
            for m in mons
        ],
        dtype=complex,
    )


def _multinom3(m):
    from math import factorial

    return factorial(3) // (factorial(m[0]) * factorial(m[1]) * factorial(m[2]))


def grassmann_image(engine: WaringEngine, decomp: PowerSumDecomp, rank_tol: float = 1e-9) -> dict:
    """Pluecker coordinates of the projected span of the six cubes.

    The span must be 3-dimensional; the certificate carries the singular
    values, and random Grassmann-Pluecker relations certify decomposability.
    """
    proj, mons = _pf_projection(engine)
    vecs = np.array([proj @ _cube_vector(l, mons) for l in decomp.lines]).T  # 7 x 6
    sv = np.linalg.svd(vecs, compute_uv=False)
    if sv[3] > rank_tol * sv[0]:
        raise RankNot3("singular values %s" % sv)
    U, _, _ = np.linalg.svd(vecs)
    basis = U[:, :3]  # 7 x 3
    idx = list(combinations(range(7), 3))
    pl = np.array([np.linalg.det(basis[list(ix), :]) for ix in idx])
    pl = pl / np.linalg.norm(pl)
    return {
        "plucker": pl,
        "index_triples": idx,
        "singular_values": sv,
        "span_dim": 3,
    }


def plucker_relation_residuals(pl, idx, rng, n: int = 10):
    """Evaluate n random 3-term Grassmann-Pluecker exchange relations."""
    lookup = {}
    for k, ix in enumerate(idx):
        lookup[ix] = pl[k]

    def p(i, j, k):
        s = sorted((i, j, k))
        if len(set(s)) < 3:
            return 0.0
        sign = _perm_sign((i, j, k))
        return sign * lookup[tuple(s)]

    out = []
    while len(out) < n:
        picks = rng.choice(7, size=5, replace=False)
        # 3-term exchange relation: p[abc] p[ade] - p[abd] p[ace] + p[abe] p[acd] = 0
        a, b, c, d, e = (int(v) for v in picks)
        val = p(a, b, c) * p(a, d, e) - p(a, b, d) * p(a, c, e) + p(a, b, e) * p(a, c, d)
        out.append(abs(val))
    return out


def _perm_sign(t):
    sign = 1
    t = list(t)
    for i in range(len(t)):
        for j in range(i + 1, len(t)):
            if t[i] > t[j]:
                sign = -sign
    return sign


def cone_gamma(engine: WaringEngine, a, seed: int = 0, n_planes: int = 30) -> dict:
    """Span and quadric-rank certificate for the union of decomposition planes
    through a.

    Generic a: the planes sweep a quadric of rank 4 inside a P^4.  For a on
    the sextic the quadric splits (rank <= 2); for a on the dual quartic the
    projection of the conic's sextic curve from the cube of a drops to
    degree 5 (all projected coordinates share the root at a's parameter).
    """
    rng = np.random.default_rng(seed)
    a = normalize_point(a)
    proj, mons = _pf_projection(engine)
    G = engine.conic_gram(a)
    singular = engine.conic_is_singular(a)
    par = None
    if singular:
        l1, l2 = split_degenerate_conic(G)
        def sample_conic_point(k):
            p, q = line_points(l1 if k % 2 == 0 else l2)
            t = rng.normal() + 1j * rng.normal()
            return normalize_point(p + t * q)
    else:
        base = a if engine.on_dual_quartic(a) < 1e-9 else point_on_conic(G, rng)
        par = ConicParam(G, base)
        def sample_conic_point(k):
            return par.point(rng.normal() + 1j * rng.normal())

    # span of the projected sextic (the conic pushed through cubes)
    curve = np.array(
        [proj @ _cube_vector(sample_conic_point(k), mons) for k in range(24)]
    )
    sv_curve = np.linalg.svd(curve, compute_uv=False)
    span_dim = int(np.sum(sv_curve > 1e-8 * sv_curve[0]))
    basis = np.linalg.svd(curve.T, full_matrices=False)[0][:, :5]  # 7 x 5

    # points on the union of planes
    pts = []
    k = 0
    guard = 0
    while len(pts) < n_planes * 4 and guard < 8 * n_planes:
        guard += 1
        lp = sample_conic_point(k)
        k += 1
        if proj_distance(lp, a) < 1e-3:
            continue
        if not singular and engine.conic_is_singular(lp):
            continue
        try:
            if singular:
                lines = _decomposition_on_line_pair(engine, a, lp, (l1, l2))
            else:
                lines = decomposition_through(engine, a, lp, par)
        except (IllConditioned, CommonComponent):
            continue
        vecs = np.array([proj @ _cube_vector(l, mons) for l in lines]).T
        U, s, _ = np.linalg.svd(vecs)
        if s[3] > 1e-7 * s[0]:
            continue
        plane = U[:, :3]
        for _ in range(4):
            c = rng.normal(size=3) + 1j * rng.normal(size=3)
            pts.append(plane @ c)
    pts5 = np.array([basis.conj().T @ p for p in pts])
    off = max(
        float(np.linalg.norm(p - basis @ (basis.conj().T @ p)) / np.linalg.norm(p))
        for p in pts
    )
    # quadrics through the point cloud in the P^4 coordinates
    rowsQ = []
    for p in pts5:
        p = p / np.linalg.norm(p)
        row = []
        for i in range(5):
            for j in range(i, 5):
                row.append(p[i] * p[j] * (1.0 if i == j else 2.0))
        rowsQ.append(row)
    A = np.array(rowsQ)
    _, svq, Vh = np.linalg.svd(A)
    null_dim = int(np.sum(svq < 1e-7 * svq[0]))
    vec = Vh[-1].conj()  # right null vector of A
    Gq = np.zeros((5, 5), dtype=complex)
    kk = 0
    for i in range(5):
        for j in range(i, 5):
            Gq[i, j] = Gq[j, i] = vec[kk]
            kk += 1
    sq = np.linalg.svd(Gq, compute_uv=False)
    qrank = int(np.sum(sq > 1e-6 * sq[0]))
    out = {
        "span_dim": span_dim,
        "span_offset": off,
        "quadric_space_dim": null_dim,
        "quadric_rank": qrank,
        "quadric_singular_values": sq,
    }
    if qrank == 4:
        # vertex should be the projected cube of a
        kernel = np.linalg.svd(Gq)[2][-1].conj()
        va = basis.conj().T @ (proj @ _cube_vector(a, mons))
        out["vertex_matches_a"] = proj_distance(kernel, va)
    if not singular and engine.on_dual_quartic(a) < 1e-9:
        out["projection_degree_drop"] = _projection_degree_drop(engine, a, proj, mons)
    return out


def _projection_degree_drop(engine, a, proj, mons):
    """For a on the dual quartic: projecting the sextic from the cube of a
    cancels the parameter of a (rational quintic)."""
    G = engine.conic_gram(a)
    par = ConicParam(G, normalize_point(a))
    va = proj @ _cube_vector(normalize_point(a), mons)
    va = va / np.linalg.norm(va)
    # each coordinate of the projected curve is a binary sextic in (s, t);
    # recover its 7 coefficients from the affine chart s = 1
    ts = np.exp(2j * np.pi * np.arange(7) / 7) * 1.1
    vals = []
    for t in ts:
        v = proj @ _cube_vector(par.point_raw(1.0, t), mons)
        v = v - (va.conj() @ v) * va  # project away from the center
        vals.append(v)
    V = np.vander(ts, 7, increasing=True)
    coeffs = np.linalg.solve(V, np.array(vals))  # row k: coefficient of t^k
    # all seven coordinate sextics must vanish at the parameter of a
    (s_a, t_a) = par.base_parameters()[0]
    nrm = max(abs(s_a), abs(t_a))
    s_a, t_a = s_a / nrm, t_a / nrm
    residues = [
        abs(sum(coeffs[k, i] * s_a ** (6 - k) * t_a ** k for k in range(7)))
        for i in range(7)
    ]
    scale = float(np.max(np.abs(coeffs)))
    return float(max(residues) / scale)

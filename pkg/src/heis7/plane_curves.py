"""Numeric helpers for plane curves: resultant solving, conics, clustering.

Ternary forms are dicts mapping degree-d exponent triples to complex
coefficients.  All solvers work projectively; points are complex 3-vectors
normalized to unit norm.  Randomized frames come from a caller-supplied
numpy Generator so every pipeline stays seed-deterministic.
"""

from __future__ import annotations

import numpy as np

from .errors import CommonComponent, IllConditioned


# ---------------------------------------------------------------------------
# form utilities
# ---------------------------------------------------------------------------


def mpoly_to_dict(P) -> dict:
    return {e: c.to_complex() for e, c in P.terms.items()}


def eval_form(f: dict, p) -> complex:
    x, y, z = p
    return sum(c * x ** e[0] * y ** e[1] * z ** e[2] for e, c in f.items())


def form_degree(f: dict) -> int:
    return max((sum(e) for e in f), default=0)


def partial_form(f: dict, i: int) -> dict:
    out = {}
    for e, c in f.items():
        if e[i]:
            ne = list(e)
            ne[i] -= 1
            ne = tuple(ne)
            out[ne] = out.get(ne, 0) + c * e[i]
    return out


def compose_linear(f: dict, M) -> dict:
    """f(M x) for a 3x3 complex matrix M."""
    M = np.asarray(M, dtype=complex)
    rows = [M[i] for i in range(3)]
    out = {}
    # expand monomial by monomial; forms here are small
    for e, c in f.items():
        terms = {(0, 0, 0): c}
        for i in range(3):
            for _ in range(e[i]):
                nxt = {}
                for ee, cc in terms.items():
                    for j in range(3):
                        if rows[i][j] != 0:
                            ne = list(ee)
                            ne[j] += 1
                            ne = tuple(ne)
                            nxt[ne] = nxt.get(ne, 0) + cc * rows[i][j]
                terms = nxt
        for ee, cc in terms.items():
            out[ee] = out.get(ee, 0) + cc
    return {e: c for e, c in out.items() if c != 0}


def normalize_point(p):
    p = np.asarray(p, dtype=complex)
    n = np.linalg.norm(p)
    if n == 0:
        raise ValueError("zero vector is not a projective point")
    p = p / n
    # fix the phase by the largest coordinate for reproducibility
    k = int(np.argmax(np.abs(p)))
    ph = p[k] / abs(p[k])
    return p / ph


def proj_distance(a, b) -> float:
    """Chordal distance min over phase of |a - e^(i t) b|, computed stably.

    Equals sqrt(2 - 2 |<a, b>|) for unit vectors, but the difference-based
    evaluation avoids the sqrt(eps) floor of the inner-product formula.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    s = np.vdot(b, a)
    if abs(s) < 1e-300:
        return float(np.sqrt(2.0))
    return float(np.linalg.norm(a - (s / abs(s)) * b))


# ---------------------------------------------------------------------------
# binary forms on lines and conics
# ---------------------------------------------------------------------------


def binary_restriction(f: dict, a, b):
    """Coefficients of f(s*a + t*b) as a binary form, ordered s^d .. t^d."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    d = form_degree(f)
    out = np.zeros(d + 1, dtype=complex)
    for e, c in f.items():
        conv = np.array([1.0 + 0j])
        for i in range(3):
            for _ in range(e[i]):
                conv = np.convolve(conv, np.array([a[i], b[i]]))
        out[: len(conv)] += c * conv
    return out


def binary_roots(coeffs, tol: float = 1e-12):
    """Projective roots (s:t) of a binary form, as pairs; degree many with multiplicity.

    ``coeffs[k]`` is the coefficient of s^(d-k) t^k.
    """
    c = np.asarray(coeffs, dtype=complex)
    scale = np.max(np.abs(c))
    if scale == 0:
        raise CommonComponent("binary form vanishes identically")
    c = c / scale
    hi = len(c) - 1
    roots = []
    while hi > 0 and abs(c[hi]) < tol:
        roots.append((0.0 + 0j, 1.0 + 0j))  # degree drop in t: root at infinity
        hi -= 1
    poly = c[: hi + 1][::-1]  # descending powers of t for np.roots
    if len(poly) > 1:
        for r in np.roots(poly):
            roots.append((1.0 + 0j, complex(r)))
    return roots


# ---------------------------------------------------------------------------
# conics
# ---------------------------------------------------------------------------


def conic_form(G) -> dict:
    G = np.asarray(G, dtype=complex)
    f = {}
    for i in range(3):
        for j in range(3):
            e = [0, 0, 0]
            e[i] += 1
            e[j] += 1
            e = tuple(e)
            f[e] = f.get(e, 0) + G[i][j]
    return {e: c for e, c in f.items() if c != 0}


def _cross_matrix(p):
    return np.array(
        [[0, p[2], -p[1]], [-p[2], 0, p[0]], [p[1], -p[0], 0]], dtype=complex
    )


def split_degenerate_conic(G, tol: float = 1e-8):
    """Split a rank<=2 symmetric gram into two lines (coefficient 3-vectors)."""
    G = np.asarray(G, dtype=complex)
    scale = np.linalg.norm(G)
    if scale == 0:
        raise CommonComponent("zero conic")
    G = G / scale
    s = np.linalg.svd(G, compute_uv=False)
    if s[2] > tol * s[0]:
        raise IllConditioned("conic is not numerically degenerate")
    if s[1] < tol * s[0]:
        # rank 1: doubled line
        w, v = np.linalg.eigh(G.conj().T @ G)
        line = G @ v[:, -1]
        line = line / np.linalg.norm(line)
        return line, line
    B = -_adjugate(G)
    k = int(np.argmax(np.abs(np.diagonal(B))))
    beta = np.sqrt(B[k, k])
    if abs(beta) < 1e-14:
        raise IllConditioned("degenerate conic with vanishing adjugate diagonal")
    p = B[:, k] / beta
    C = G + _cross_matrix(p)
    idx = np.unravel_index(int(np.argmax(np.abs(C))), C.shape)
    g = C[idx[0], :]
    h = C[:, idx[1]]
    return g / np.linalg.norm(g), h / np.linalg.norm(h)


def _adjugate(M):
    out = np.zeros((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            minor = np.delete(np.delete(M, i, axis=0), j, axis=1)
            out[j, i] = (-1) ** (i + j) * (minor[0, 0] * minor[1, 1] - minor[0, 1] * minor[1, 0])
    return out


def line_points(line):
    """Two independent points spanning the line with given coefficient vector."""
    line = np.asarray(line, dtype=complex)
    k = int(np.argmax(np.abs(line)))
    others = [i for i in range(3) if i != k]
    pts = []
    for o in others:
        p = np.zeros(3, dtype=complex)
        p[o] = 1.0
        p[k] = -line[o] / line[k]
        pts.append(p / np.linalg.norm(p))
    return pts


def point_on_conic(G, rng) -> np.ndarray:
    """A point of the conic, found by intersecting with a random line."""
    G = np.asarray(G, dtype=complex)
    for _ in range(20):
        a = rng.normal(size=3) + 1j * rng.normal(size=3)
        b = rng.normal(size=3) + 1j * rng.normal(size=3)
        coeffs = binary_restriction(conic_form(G), a, b)
        try:
            roots = binary_roots(coeffs)
        except CommonComponent:
            continue
        if roots:
            s, t = roots[0]
            p = s * a + t * b
            if np.linalg.norm(p) > 1e-9:
                return normalize_point(p)
    raise IllConditioned("could not find a point on the conic")


class ConicParam:
    """Rational parametrization of a smooth conic from a base point on it.

    phi(s:t) is quadratic in (s, t); each coordinate is stored as its three
    binary coefficients.  phi covers the conic once; the base point appears
    at the parameter where the moving line is tangent.
    """

    def __init__(self, G, base_point):
        self.G = np.asarray(G, dtype=complex)
        p = np.asarray(base_point, dtype=complex)
        p = p / np.linalg.norm(p)
        res = abs(p @ self.G @ p) / np.linalg.norm(self.G)
        if res > 1e-7:
            raise IllConditioned("base point not on conic (residual %.2e)" % res)
        self.p = p
        # frame: two directions completing p
        basis = [p]
        for i in range(3):
            e = np.zeros(3, dtype=complex)
            e[i] = 1
            v = e - sum(np.vdot(b, e) * b for b in basis)
            if np.linalg.norm(v) > 1e-6:
                basis.append(v / np.linalg.norm(v))
            if len(basis) == 3:
                break
        self.u0, self.u1 = basis[1], basis[2]
        # phi(s,t) = (u' G u) p - 2 (u' G p) u  with u = s u0 + t u1
        # each coordinate: quadratic binary form
        G2 = self.G
        a0 = self.u0 @ G2 @ self.u0
        a1 = self.u0 @ G2 @ self.u1 + self.u1 @ G2 @ self.u0
        a2 = self.u1 @ G2 @ self.u1
        b0 = self.u0 @ G2 @ p
        b1 = self.u1 @ G2 @ p
        self.coeffs = []
        for i in range(3):
            # (a0 s^2 + a1 st + a2 t^2) p_i - 2 (b0 s + b1 t)(s u0_i + t u1_i)
            c0 = a0 * p[i] - 2 * b0 * self.u0[i]
            c1 = a1 * p[i] - 2 * (b0 * self.u1[i] + b1 * self.u0[i])
            c2 = a2 * p[i] - 2 * b1 * self.u1[i]
            self.coeffs.append(np.array([c0, c1, c2]))

    def point_raw(self, s, t=None) -> np.ndarray:
        """Unnormalized quadratic parametrization (polynomial in (s, t))."""
        if t is None:
            s, t = 1.0, s
        return np.array([c[0] * s * s + c[1] * s * t + c[2] * t * t for c in self.coeffs])

    def point(self, s, t=None) -> np.ndarray:
        return normalize_point(self.point_raw(s, t))

    def base_parameters(self):
        """Parameters (s:t) mapping to the base point."""
        b0 = self.u0 @ self.G @ self.p
        b1 = self.u1 @ self.G @ self.p
        # phi hits p where (b0 s + b1 t) = 0
        return [(-b1, b0)]

    def restrict(self, f: dict):
        """Binary coefficients (degree 2*deg f) of f composed with phi."""
        d = form_degree(f)
        out = np.zeros(2 * d + 1, dtype=complex)
        for e, c in f.items():
            conv = np.array([1.0 + 0j])
            for i in range(3):
                for _ in range(e[i]):
                    conv = np.convolve(conv, self.coeffs[i])
            out[: len(conv)] += c * conv
        return out

    def parameter_of(self, q, rng=None) -> tuple:
        """A parameter (s:t) with phi(s:t) ~ q, via a line through q."""
        q = np.asarray(q, dtype=complex)
        # solve phi(s,t) x q = 0: two independent cross-product components
        best = None
        for i, j in ((0, 1), (0, 2), (1, 2)):
            ci = self.coeffs[i] * q[j] - self.coeffs[j] * q[i]
            if best is None or np.max(np.abs(ci)) > np.max(np.abs(best)):
                best = ci
        roots = binary_roots(best)
        cands = []
        for s, t in roots:
            d = proj_distance(self.point(s, t), q)
            cands.append((d, (s, t)))
        cands.sort(key=lambda x: x[0])
        return cands[0][1]


# ---------------------------------------------------------------------------
# zero-dimensional solving
# ---------------------------------------------------------------------------


def _sylvester_det(p, q):
    n, m = len(p) - 1, len(q) - 1
    if n < 0 or m < 0:
        return 0.0
    size = n + m
    if size == 0:
        return 1.0
    S = np.zeros((size, size), dtype=complex)
    for i in range(m):
        S[i, i : i + n + 1] = p
    for i in range(n):
        S[m + i, i : i + m + 1] = q
    return np.linalg.det(S)


def _univariate_coeffs(f: dict, u: complex, var: int, other: int, fixed: int):
    """Coefficients in the remaining variable after x[var]=u, x[fixed]=1."""
    d = form_degree(f)
    out = np.zeros(d + 1, dtype=complex)
    for e, c in f.items():
        out[e[other]] += c * u ** e[var]
    return out


def _poly_eval_2(f: dict, u, v):
    return sum(c * u ** e[0] * v ** e[1] for e, c in f.items())


def common_zeros(f1: dict, f2: dict, rng, cluster_tol: float = 1e-4, polish: bool = True):
    """Isolated common zeros of two ternary forms with multiplicities.

    Returns a list of (point, multiplicity); multiplicities add up to
    deg(f1) * deg(f2) when the curves share no component.  Works in a random
    unitary frame to keep all intersections affine and separated.
    """
    d1, d2 = form_degree(f1), form_degree(f2)
    for attempt in range(8):
        Q, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
        g1 = compose_linear(f1, Q)
        g2 = compose_linear(f2, Q)
        try:
            pts = _common_zeros_frame(g1, g2, d1, d2, rng, cluster_tol, polish)
        except IllConditioned:
            continue
        out = []
        for (u, v), mult in pts:
            p = Q @ np.array([u, v, 1.0], dtype=complex)
            out.append((normalize_point(p), mult))
        return out
    raise IllConditioned("no usable frame for the plane system")


def _common_zeros_frame(g1, g2, d1, d2, rng, cluster_tol, polish):
    # dehomogenize at x2 = 1: bivariate in (u, v)
    h1 = {(e[0], e[1]): c for e, c in g1.items()}
    h2 = {(e[0], e[1]): c for e, c in g2.items()}
    h1 = _merge(h1)
    h2 = _merge(h2)
    rdeg = d1 * d2
    K = rdeg + 1
    radius = 1.0 + rng.uniform(0.1, 0.5)
    nodes = radius * np.exp(2j * np.pi * (np.arange(K) + rng.uniform(0, 1)) / K)
    vals = np.zeros(K, dtype=complex)
    for k, u in enumerate(nodes):
        p = np.zeros(d1 + 1, dtype=complex)
        q = np.zeros(d2 + 1, dtype=complex)
        for (eu, ev), c in h1.items():
            p[d1 - ev] += c * u ** eu  # descending powers of v
        for (eu, ev), c in h2.items():
            q[d2 - ev] += c * u ** eu
        vals[k] = _sylvester_det(p, q)
    scale = np.max(np.abs(vals))
    if scale == 0 or not np.isfinite(scale):
        raise IllConditioned("resultant vanishes on the sample circle")
    V = np.vander(nodes, K, increasing=True)
    coeffs = np.linalg.solve(V, vals / scale)  # c0 + c1 u + ...
    if abs(coeffs[-1]) < 1e-10 * np.max(np.abs(coeffs)):
        raise IllConditioned("resultant degree dropped; curves may meet at infinity")
    uroots = np.roots(coeffs[::-1])
    # cluster u-roots into intersection points with multiplicity
    clusters = cluster_values(uroots, cluster_tol * max(1.0, np.max(np.abs(uroots))))
    out = []
    for ucenter, mult in clusters:
        # v-candidates from g1, validated on g2
        p = np.zeros(d1 + 1, dtype=complex)
        for (eu, ev), c in h1.items():
            p[d1 - ev] += c * ucenter ** eu
        lead = 0
        while lead < len(p) - 1 and abs(p[lead]) < 1e-10 * np.max(np.abs(p)):
            lead += 1
        vr = np.roots(p[lead:]) if len(p) - lead > 1 else []
        if len(vr) == 0:
            raise IllConditioned("no finite v-root above a resultant root")
        resv = [abs(_poly_eval_2(h2, ucenter, v)) for v in vr]
        v = vr[int(np.argmin(resv))]
        u = ucenter
        if polish:
            u, v = _newton_pair(h1, h2, u, v)
        out.append(((u, v), mult))
    return out


def _merge(h):
    out = {}
    for e, c in h.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c != 0}


def _newton_pair(h1, h2, u, v, iters: int = 12):
    d1u = _partial2(h1, 0)
    d1v = _partial2(h1, 1)
    d2u = _partial2(h2, 0)
    d2v = _partial2(h2, 1)
    for _ in range(iters):
        F = np.array([_poly_eval_2(h1, u, v), _poly_eval_2(h2, u, v)])
        J = np.array(
            [
                [_poly_eval_2(d1u, u, v), _poly_eval_2(d1v, u, v)],
                [_poly_eval_2(d2u, u, v), _poly_eval_2(d2v, u, v)],
            ]
        )
        det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
        if abs(det) < 1e-14:
            break
        du = (F[0] * J[1, 1] - F[1] * J[0, 1]) / det
        dv = (J[0, 0] * F[1] - J[1, 0] * F[0]) / det
        u, v = u - du, v - dv
        if abs(du) + abs(dv) < 1e-15:
            break
    return u, v


def _partial2(h, i):
    out = {}
    for e, c in h.items():
        if e[i]:
            ne = list(e)
            ne[i] -= 1
            ne = tuple(ne)
            out[ne] = out.get(ne, 0) + c * e[i]
    return out


def cluster_values(values, tol: float):
    """Single-linkage clustering of complex scalars; [(center, size)]."""
    values = list(values)
    used = [False] * len(values)
    clusters = []
    for i, v in enumerate(values):
        if used[i]:
            continue
        group = [i]
        used[i] = True
        frontier = [i]
        while frontier:
            j = frontier.pop()
            for k in range(len(values)):
                if not used[k] and abs(values[k] - values[j]) <= tol:
                    used[k] = True
                    group.append(k)
                    frontier.append(k)
        center = sum(values[g] for g in group) / len(group)
        clusters.append((center, len(group)))
    return clusters


def cluster_projective_points(points, tol: float):
    """Single-linkage clustering of projective points; [(center, size)]."""
    pts = [normalize_point(p) for p in points]
    used = [False] * len(pts)
    clusters = []
    for i in range(len(pts)):
        if used[i]:
            continue
        group = [i]
        used[i] = True
        frontier = [i]
        while frontier:
            j = frontier.pop()
            for k in range(len(pts)):
                if not used[k] and proj_distance(pts[j], pts[k]) <= tol:
                    used[k] = True
                    group.append(k)
                    frontier.append(k)
        clusters.append((pts[group[0]], len(group)))
    return clusters


def min_intercluster_gap(points, clusters):
    """Smallest distance between points of different clusters (for ambiguity tests)."""
    pts = [normalize_point(p) for p in points]
    labels = []
    for p in pts:
        best, lab = None, None
        for idx, (c, _) in enumerate(clusters):
            d = proj_distance(p, c)
            if best is None or d < best:
                best, lab = d, idx
        labels.append(lab)
    gap = None
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if labels[i] != labels[j]:
                d = proj_distance(pts[i], pts[j])
                gap = d if gap is None else min(gap, d)
    return gap

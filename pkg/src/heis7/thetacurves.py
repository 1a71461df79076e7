"""Numeric invariant elliptic normal curves of degree 7 via theta series.

The embedding coordinates are

    f_k(z) = sum_n exp(pi*i*7*tau*(n + k/7 + 1/2)^2
                       + 2*pi*i*7*(n + k/7 + 1/2)*(z + 1/2)),

whose half-integer characteristics make the parity twist come out right:
f(-z) = -(index negation applied to f(z)), so the image of z = 0 lands in
the odd 3-space and the three nonzero half-periods land in the even 4-space.
Lattice translations multiply all seven coordinates by one common factor, so
every projective statement survives argument reduction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationInsufficient
from .plane_curves import normalize_point, proj_distance

TAIL_BOUND = 1e-14


@dataclass(frozen=True)
class EllipticModel:
    """Degree-7 theta embedding data for the torus C/(Z + Z tau)."""

    tau: complex
    truncation: int = 0

    def __post_init__(self):
        if self.tau.imag <= 0:
            raise ValueError("tau must have positive imaginary part")
        if self.truncation == 0:
            N = 3
            while 7 * math.pi * self.tau.imag * (N - 1.5) ** 2 < -math.log(TAIL_BOUND):
                N += 1
            object.__setattr__(self, "truncation", N + 1)
        if self.truncation < 3:
            raise TruncationInsufficient("truncation %d too small" % self.truncation)

    def reduce(self, z: complex) -> complex:
        n = round(z.imag / self.tau.imag)
        z = z - n * self.tau
        return z - round(z.real)

    def half_periods(self):
        return (0.5 + 0j, self.tau / 2, (1 + self.tau) / 2)


def theta_point(model: EllipticModel, z: complex) -> np.ndarray:
    """The seven projective coordinates at z, normalized to unit norm."""
    z = model.reduce(complex(z))
    N = model.truncation
    out = np.zeros(7, dtype=complex)
    for k in range(7):
        a = k / 7.0 + 0.5
        total = 0j
        for n in range(-N, N + 1):
            m = n + a
            total += cmath.exp(
                1j * math.pi * 7 * model.tau * m * m + 2j * math.pi * 7 * m * (z + 0.5)
            )
        out[k] = total
    nrm = np.linalg.norm(out)
    if nrm < 1e-100:
        raise TruncationInsufficient("theta vector vanished numerically")
    return out / nrm


def _proj_residual(v, w) -> float:
    return proj_distance(v, w)


def _iota_vec(v):
    return np.array([v[(-k) % 7] for k in range(7)])


def equivariance_residuals(model: EllipticModel, z: complex) -> dict:
    """Contract: f(z + 1/7) ~ diag(zeta^k) f(z) and f(z - tau/7) ~ shift f(z)."""
    f = theta_point(model, z)
    zeta = np.exp(2j * np.pi / 7)
    diag = np.array([zeta ** k for k in range(7)]) * f
    shift = np.array([f[(k - 1) % 7] for k in range(7)])
    return {
        "diagonal": _proj_residual(theta_point(model, z + 1.0 / 7), diag),
        "shift": _proj_residual(theta_point(model, z - model.tau / 7), shift),
        "parity": _proj_residual(theta_point(model, -z), -_iota_vec(f)),
    }


def odd_part(v):
    return (v - _iota_vec(v)) / 2


def even_part(v):
    return (v + _iota_vec(v)) / 2


def odd_residual(v) -> float:
    """Distance from the odd (plane) span, relative."""
    return float(np.linalg.norm(even_part(v)) / np.linalg.norm(v))


def even_residual(v) -> float:
    return float(np.linalg.norm(odd_part(v)) / np.linalg.norm(v))


def parity_spans(model: EllipticModel) -> dict:
    """f(0) lies in the odd 3-space; half-period images lie in the even 4-space."""
    f0 = theta_point(model, 0)
    halves = [theta_point(model, p) for p in model.half_periods()]
    return {
        "origin_odd_residual": odd_residual(f0),
        "half_period_even_residuals": [even_residual(v) for v in halves],
    }


def plane_coords(v) -> np.ndarray:
    """Coordinates in the basis (e1-e6, e2-e5, e3-e4) of an odd vector."""
    return np.array([v[1] - v[6], v[2] - v[5], v[3] - v[4]]) / 2


def space_coords(v) -> np.ndarray:
    """Coordinates in the basis (e0, e1+e6, e2+e5, e3+e4) of an even vector."""
    return np.array([v[0], (v[1] + v[6]) / 2, (v[2] + v[5]) / 2, (v[3] + v[4]) / 2])


def septimic_on_curve(system, model: EllipticModel, n_samples: int = 50, seed: int = 0) -> dict:
    """Normalized residuals of the invariant septimics along the curve."""
    rng = np.random.default_rng(seed)
    polys = [system.trivial_line] + list(system.w7_part)
    norms = [
        math.sqrt(sum(abs(c.to_complex()) ** 2 for c in p.terms.values())) for p in polys
    ]
    worst = 0.0
    for _ in range(n_samples):
        z = rng.uniform(-0.5, 0.5) + rng.uniform(-0.5, 0.5) * model.tau
        f = theta_point(model, z)
        worst = max(
            worst,
            max(abs(p.evaluate_complex(f)) / n for p, n in zip(polys, norms)),
        )
    return {"max_residual": worst}


# ---------------------------------------------------------------------------
# translation scrolls
# ---------------------------------------------------------------------------


@dataclass
class ScrollSection:
    """Plane section data of a translation scroll."""

    sigma: complex
    points: list  # [(plane 3-vector, multiplicity)]
    type: tuple
    conic_residual: float


def _invariant_line_points(model: EllipticModel, sigma: complex):
    """The plane points of the four involution-invariant lines 2z = -sigma."""
    pts = []
    for h in (0, 0.5, model.tau / 2, (1 + model.tau) / 2):
        z = -sigma / 2 + h
        v = theta_point(model, z)
        w = odd_part(v)
        if np.linalg.norm(w) < 1e-12:
            continue
        pts.append(plane_coords(w))
    return pts


def scroll_plane_section(model: EllipticModel, sigma: complex) -> ScrollSection:
    """Scheme of the scroll's plane section: f(0) doubly plus four line points.

    For sigma -> 0 the z = 0 tangent line contributes no new plane point and
    the type degenerates from (2,1,1,1,1) to (3,1,1,1).
    """
    f0 = plane_coords(odd_part(theta_point(model, 0)))
    if abs(complex(sigma)) < 1e-12:
        # tangent scroll: the z = 0 tangent line meets the plane only at f(0),
        # which is already the double-curve point; the tangent line at a half
        # period h is span{f(h), f'(h)} with f(h) even, so its plane point
        # comes from the odd part of f'(h)
        line_pts = []
        for h in (0.5, model.tau / 2, (1 + model.tau) / 2):
            eps = 1e-5
            fp = theta_point(model, h + eps) - theta_point(model, h - eps)
            line_pts.append(plane_coords(odd_part(fp)))
        weighted = [(f0, 3)] + [(p, 1) for p in line_pts]
    else:
        line_pts = _invariant_line_points(model, sigma)
        weighted = [(f0, 2)] + [(p, 1) for p in line_pts]
    parts = tuple(sorted((m for _, m in weighted), reverse=True))
    flat = []
    for p, m in weighted:
        flat.extend([p] * m)
    conic = conic_through_residual(flat)
    return ScrollSection(sigma=complex(sigma), points=weighted, type=parts, conic_residual=conic)


def conic_through_residual(points) -> float:
    """Smallest singular value ratio of the 6-point Veronese evaluation matrix."""
    rows = []
    for p in points:
        p = np.asarray(p, dtype=complex)
        p = p / np.linalg.norm(p)
        x, y, z = p
        rows.append([x * x, y * y, z * z, x * y, x * z, y * z])
    A = np.array(rows)
    sv = np.linalg.svd(A, compute_uv=False)
    return float(sv[-1] / sv[0])


def scroll_points(model: EllipticModel, sigma: complex, n: int, seed: int = 0):
    """Random points on the scroll: combinations on lines f(z) f(z+sigma)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        z = rng.uniform(-0.5, 0.5) + rng.uniform(-0.5, 0.5) * model.tau
        a = theta_point(model, z)
        b = theta_point(model, z + sigma)
        c = rng.normal() + 1j * rng.normal()
        d = rng.normal() + 1j * rng.normal()
        out.append(normalize_point(a * c + b * d))
    return out


def two_torsion_ruling(model: EllipticModel, sigma: complex = 0.5, shift: complex = 0):
    """The ruling of the half-period scroll contained in a conjugate 3-space.

    For sigma = 1/2 the ruling joining f(tau/2) and f((1+tau)/2) has both
    end points (hence all its points) inside the even 4-space; translating
    the parameter by a 7-torsion shift produces the ruling inside the
    corresponding conjugate 3-space.  Found in closed form, not by search.
    """
    z0 = (model.tau / 2 if abs(complex(sigma) - 0.5) < 1e-12 else 0.5) + shift
    return theta_point(model, z0), theta_point(model, z0 + sigma)


def two_torsion_scroll_checks(system, model: EllipticModel, n_line: int = 12, seed: int = 0) -> dict:
    """The half-period scroll meets the even 3-space along a line and lies on
    every invariant septimic."""
    sigma = 0.5  # a nonzero half period
    rng = np.random.default_rng(seed)
    u1, u2 = two_torsion_ruling(model, sigma)
    line_samples = []
    worst_even = 0.0
    for _ in range(n_line):
        c, d = rng.normal() + 1j * rng.normal(), rng.normal() + 1j * rng.normal()
        p = normalize_point(u1 * c + u2 * d)
        worst_even = max(worst_even, even_residual(p))
        line_samples.append(space_coords(p))
    M = np.array([p / np.linalg.norm(p) for p in line_samples])
    sv = np.linalg.svd(M, compute_uv=False)
    line_rank_residual = float(sv[2] / sv[0])

    polys = [system.trivial_line] + list(system.w7_part)
    norms = [
        math.sqrt(sum(abs(c.to_complex()) ** 2 for c in p.terms.values())) for p in polys
    ]
    worst_sept = 0.0
    for p7 in scroll_points(model, sigma, 20, seed=seed + 1):
        worst_sept = max(
            worst_sept,
            max(abs(p.evaluate_complex(p7)) / n for p, n in zip(polys, norms)),
        )
    return {
        "even_space_residual": worst_even,
        "line_rank_residual": line_rank_residual,
        "section_points": line_samples,
        "septimic_residual": worst_sept,
        "degree_bookkeeping": (49 * 1 + 7, 7 * 7),
    }


def abelian_section_count(model: EllipticModel, sigma: complex) -> dict:
    """Section lengths 6 (plane) and 10 (space) for a generic scroll.

    The space side: the four invariant-line points (length 1 each) plus the
    three half-period curve points on the scroll's double curve (length 2).
    """
    plane = scroll_plane_section(model, sigma)
    space_pts = []
    for h in (0, 0.5, model.tau / 2, (1 + model.tau) / 2):
        z = -sigma / 2 + h
        v = theta_point(model, z)
        w = even_part(v)
        space_pts.append((space_coords(w), 1))
    for h in model.half_periods():
        v = theta_point(model, h)
        space_pts.append((space_coords(even_part(v)), 2))
    return {
        "plane_length": sum(m for _, m in plane.points),
        "space_length": sum(m for _, m in space_pts),
        "plane_section": plane,
        "space_points": space_pts,
    }


def section_scheme_symmetric(model: EllipticModel, sigma: complex, tol: float = 1e-7) -> bool:
    """The scroll section is invariant under sigma -> -sigma."""
    s1 = scroll_plane_section(model, sigma)
    s2 = scroll_plane_section(model, -sigma)
    if s1.type != s2.type:
        return False
    for p, m in s1.points:
        if not any(
            m == m2 and proj_distance(p, q) < tol for q, m2 in s2.points
        ):
            return False
    return True

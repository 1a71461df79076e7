"""The level-7 Heisenberg group, its normalizer generators and fixed spaces.

Conventions: sigma shifts basis vectors e_i -> e_{i+1}, tau scales e_i by
zeta^i, iota negates indices.  The determinant-1 realization of the "-1"
involution of the extended group is -iota; both sign conventions occur in the
literature, and eigenspaces are therefore named by dimension: the plane comes
from the 3-dimensional eigenspace, the space from the 4-dimensional one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    NotAnInvolution,
    NotInNormalizer,
    OrderGuardExceeded,
    WrongEigendimensions,
)
from .exactcore import (
    CYC_ONE,
    CYC_ZERO,
    CycNum,
    ExactMatrix,
    MPoly,
    gauss_sum,
    poly_apply_linear,
    row_space_signature,
)


class GroupElement:
    """Invertible 7x7 cyclotomic matrix with projective-equality support."""

    __slots__ = ("matrix", "label", "_inv")

    def __init__(self, matrix: ExactMatrix, label: str = ""):
        if matrix.rows != 7 or matrix.cols != 7:
            raise ValueError("group elements are 7x7")
        self.matrix = matrix
        self.label = label
        self._inv = None

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        lbl = "%s*%s" % (self.label, other.label) if self.label and other.label else ""
        return GroupElement(self.matrix * other.matrix, lbl)

    def inverse(self) -> "GroupElement":
        if self._inv is None:
            self._inv = GroupElement(self.matrix.inverse(), "(%s)^-1" % self.label)
        return self._inv

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def projective_key(self):
        """Matrix scaled so its first nonzero entry is 1; hashable."""
        for i in range(7):
            for j in range(7):
                v = self.matrix.entry(i, j)
                if not v.is_zero():
                    scaled = self.matrix * v.inverse()
                    return tuple(tuple(r) for r in (scaled.row(k) for k in range(7)))
        raise ValueError("zero matrix")

    def proj_equal(self, other: "GroupElement") -> bool:
        return self.projective_key() == other.projective_key()

    def __repr__(self):
        return "GroupElement(%s)" % (self.label or "7x7")


def _perm_matrix(images):
    """Matrix sending e_i to e_{images[i]}."""
    m = [[CYC_ZERO] * 7 for _ in range(7)]
    for i in range(7):
        m[images[i]][i] = CYC_ONE
    return ExactMatrix(m)


def _diag(scalars):
    return ExactMatrix([[scalars[i] if i == j else CYC_ZERO for j in range(7)] for i in range(7)])


def generators() -> dict:
    """sigma, tau, iota and the normalizer generators fourier_S, gauss_V."""
    sigma = GroupElement(_perm_matrix([(i + 1) % 7 for i in range(7)]), "s")
    tau = GroupElement(_diag([CycNum.zeta(i) for i in range(7)]), "t")
    iota = GroupElement(_perm_matrix([(-i) % 7 for i in range(7)]), "i")
    ginv = gauss_sum().inverse()
    fourier = GroupElement(
        ExactMatrix([[CycNum.zeta(i * j) * ginv for i in range(7)] for j in range(7)]), "S"
    )
    gauss_v = GroupElement(_diag([CycNum.zeta(4 * i * i) for i in range(7)]), "V")
    return {"sigma": sigma, "tau": tau, "iota": iota, "fourier_S": fourier, "gauss_V": gauss_v}


def group_closure(gens, projective: bool = True, guard: int = 10 ** 6) -> list:
    """Closure under products; projective closure quotients by scalars."""
    key = (lambda g: g.projective_key()) if projective else (lambda g: g.matrix)
    elements = {}
    frontier = []
    ident = GroupElement(ExactMatrix.identity(7), "1")
    for g in [ident] + list(gens):
        k = key(g)
        if k not in elements:
            elements[k] = g
            frontier.append(g)
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                gh = g * h
                k = key(gh)
                if k not in elements:
                    elements[k] = gh
                    nxt.append(gh)
                    if len(elements) > guard:
                        raise OrderGuardExceeded("closure exceeded %d elements" % guard)
        frontier = nxt
    out = list(elements.values())
    out.sort(key=lambda g: g.label)
    return out


def _match_monomial_pattern(m: ExactMatrix):
    """Recognize a scalar multiple of sigma^a tau^c; returns (a, c) or None."""
    shift = None
    for i in range(7):
        col = [m.entry(r, i) for r in range(7)]
        nz = [r for r, v in enumerate(col) if not v.is_zero()]
        if len(nz) != 1:
            return None
        s = (nz[0] - i) % 7
        if shift is None:
            shift = s
        elif s != shift:
            return None
    # column i maps to zeta^(c*i) * scalar at row i+shift
    base = m.entry(shift, 0)
    ratio = m.entry((1 + shift) % 7, 1) * base.inverse()
    c = None
    for k in range(7):
        if ratio == CycNum.zeta(k):
            c = k
            break
    if c is None:
        return None
    for i in range(7):
        if m.entry((i + shift) % 7, i) != base * CycNum.zeta(c * i):
            return None
    return shift, c


def sl2_image(n: GroupElement):
    """Image of a normalizer element in SL(2, F_7).

    Returns ((a, b), (c, d)) with n sigma n^-1 ~ sigma^a tau^c and
    n tau n^-1 ~ sigma^b tau^d projectively.
    """
    gens = generators()
    ninv = n.inverse()
    first = _match_monomial_pattern((n * gens["sigma"] * ninv).matrix)
    second = _match_monomial_pattern((n * gens["tau"] * ninv).matrix)
    if first is None or second is None:
        raise NotInNormalizer(n.label or "element")
    a, c = first
    b, d = second
    if (a * d - b * c) % 7 != 1:
        raise NotInNormalizer("conjugation image not in SL(2,F_7)")
    return ((a, b), (c, d))


@dataclass(frozen=True)
class FixedSpacePair:
    """3-dimensional plane and 4-dimensional space fixed by an involution."""

    plane: tuple  # 3 basis vectors, each a 7-tuple of CycNum
    space: tuple  # 4 basis vectors
    involution: GroupElement

    def plane_signature(self):
        return row_space_signature(ExactMatrix(self.plane))

    def space_signature(self):
        return row_space_signature(ExactMatrix(self.space))


def _sqrt_scalar(lam: CycNum):
    if lam == CYC_ONE:
        return CYC_ONE
    if lam.is_rational():
        q = lam.as_rat()
        if q > 0:
            num, den = q.numerator, q.denominator
            rn, rd = Fraction(num).numerator, den
            import math

            sn, sd = math.isqrt(rn), math.isqrt(rd)
            if sn * sn == rn and sd * sd == rd:
                return CycNum.from_rat(Fraction(sn, sd))
    return None


def eigenspace_split(involution: GroupElement) -> FixedSpacePair:
    """Split V_0 into the 3- and 4-dimensional eigenspaces of an involution."""
    sq = involution.matrix * involution.matrix
    lam = sq.entry(0, 0)
    scalar = _diag([lam] * 7)
    if sq != scalar:
        raise NotAnInvolution("square is not scalar")
    mu = _sqrt_scalar(lam)
    if mu is None:
        raise NotAnInvolution("square scalar has no admissible square root")
    ident = ExactMatrix.identity(7)
    plus = (involution.matrix + ident * (-mu)).kernel_basis()
    minus = (involution.matrix + ident * mu).kernel_basis()
    dims = sorted((len(plus), len(minus)))
    if dims != [3, 4]:
        raise WrongEigendimensions("got dimensions %s" % (dims,))
    three, four = (plus, minus) if len(plus) == 3 else (minus, plus)
    return FixedSpacePair(
        plane=tuple(tuple(v) for v in three),
        space=tuple(tuple(v) for v in four),
        involution=involution,
    )


def _power(g: GroupElement, k: int) -> GroupElement:
    out = GroupElement(ExactMatrix.identity(7), "1")
    for _ in range(k):
        out = out * g
    return out


def fixed_spaces_orbit() -> list:
    """The 49 plane/space pairs, one per conjugate b iota b^-1, b in <sigma,tau>."""
    g = generators()
    sigma, tau, iota = g["sigma"], g["tau"], g["iota"]
    pairs = []
    for m in range(7):
        sm = _power(sigma, m)
        for n in range(7):
            b = sm.matrix * _power(tau, n).matrix
            inv = GroupElement(b * iota.matrix * b.inverse(), "s^%d t^%d i" % (m, n))
            pairs.append(eigenspace_split(inv))
    return pairs


def act_on_poly(g: GroupElement, P: MPoly) -> MPoly:
    """Action on polynomials with covariant vanishing loci: Z(act(g,P)) = g.Z(P)."""
    if P.nvars != 7:
        raise ValueError("polynomial must live on the 7-dimensional space")
    return poly_apply_linear(P, g.inverse().matrix)


def minus_iota() -> GroupElement:
    """The determinant-1 involution -iota realizing '-1' inside SL(V_0)."""
    gens = generators()
    return GroupElement(gens["iota"].matrix * CycNum.from_rat(-1), "-i")


def sl_normalize(g: GroupElement) -> GroupElement:
    """Rescale to determinant 1.  Our generators all have det +-1; a scalar c
    with c^7 = 1/det exists in the field only for det = +-1, which suffices."""
    d = g.matrix.det()
    if d == CYC_ONE:
        return g
    if d == CycNum.from_rat(-1):
        return GroupElement(g.matrix * CycNum.from_rat(-1), "-" + g.label)
    raise NotInNormalizer("determinant %r admits no 7th-root rescaling" % d)

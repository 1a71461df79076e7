"""Exact arithmetic substrate: Q, Q(zeta_7), sparse polynomials, exact linear algebra.

The coefficient tower is fixed to Q inside Q(zeta_7); every exact computation in
the toolkit runs over these two fields.  The complex embedding is pinned to
zeta_7 -> exp(2*pi*i/7), so the Gauss sum g = 1 + 2(z + z^2 + z^4) embeds to
+i*sqrt(7).  All values are immutable after construction.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InvalidScalar

# Rational scalars are stdlib Fractions: always reduced, denominator > 0.
Rat = Fraction

_ZETA_COMPLEX = [cmath.exp(2j * cmath.pi * k / 7) for k in range(7)]


def _gcd_all(values):
    g = 0
    for v in values:
        g = math.gcd(g, v)
    return g


class CycNum:
    """Element of Q(zeta_7), reduced to degree <= 5 modulo 1+z+...+z^6.

    Stored as six integer numerators over one positive denominator; the public
    ``coeffs`` view is the tuple of six reduced rationals.
    """

    __slots__ = ("_n", "_d")

    def __init__(self, nums: Sequence[int], den: int = 1):
        if den == 0:
            raise InvalidScalar("zero denominator")
        nums = list(nums)
        if len(nums) != 6:
            raise ValueError("need exactly 6 coefficients")
        if den < 0:
            den = -den
            nums = [-v for v in nums]
        g = math.gcd(_gcd_all(nums), den)
        if g > 1:
            nums = [v // g for v in nums]
            den //= g
        self._n = tuple(nums)
        self._d = den

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rat(q) -> "CycNum":
        q = Fraction(q)
        return CycNum([q.numerator, 0, 0, 0, 0, 0], q.denominator)

    @staticmethod
    def zeta(k: int = 1) -> "CycNum":
        k %= 7
        if k == 6:
            return CycNum([-1, -1, -1, -1, -1, -1], 1)
        n = [0] * 6
        n[k] = 1
        return CycNum(n, 1)

    @staticmethod
    def from_coeffs(coeffs: Iterable) -> "CycNum":
        cs = [Fraction(c) for c in coeffs]
        if len(cs) != 6:
            raise ValueError("need exactly 6 coefficients")
        den = math.lcm(*(c.denominator for c in cs)) if cs else 1
        return CycNum([int(c * den) for c in cs], den)

    @staticmethod
    def _from_seven(nums7, den):
        # reduce a zeta^0..zeta^6 integer vector by the relation sum zeta^k = 0
        c6 = nums7[6]
        return CycNum([nums7[i] - c6 for i in range(6)], den)

    # -- views ---------------------------------------------------------

    @property
    def coeffs(self) -> tuple:
        return tuple(Fraction(v, self._d) for v in self._n)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self._n)

    def is_rational(self) -> bool:
        return all(v == 0 for v in self._n[1:])

    def as_rat(self) -> Fraction:
        if not self.is_rational():
            raise InvalidScalar("not a rational value: %s" % (self,))
        return Fraction(self._n[0], self._d)

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, CycNum):
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum.from_rat(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        da, db = self._d, o._d
        return CycNum([a * db + b * da for a, b in zip(self._n, o._n)], da * db)

    __radd__ = __add__

    def __neg__(self):
        return CycNum([-v for v in self._n], self._d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._n, o._n
        c = [0] * 11
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        c[i + j] += ai * bj
        folded = [c[i] + (c[i + 7] if i + 7 < 11 else 0) for i in range(7)]
        return CycNum._from_seven(folded, self._d * o._d)

    __rmul__ = __mul__

    def galois(self, k: int) -> "CycNum":
        """Apply the field automorphism zeta -> zeta^k (k invertible mod 7)."""
        k %= 7
        if k == 0:
            raise InvalidScalar("zeta -> zeta^0 is not an automorphism")
        out = [0] * 7
        for i, v in enumerate(self._n):
            out[(i * k) % 7] += v
        return CycNum._from_seven(out, self._d)

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise InvalidScalar("division by zero")
        if self.is_rational():
            q = self.as_rat()
            return CycNum.from_rat(Fraction(q.denominator, q.numerator))
        prod = self.galois(2)
        for k in (3, 4, 5, 6):
            prod = prod * self.galois(k)
        norm = (self * prod).as_rat()  # field norm, a nonzero rational
        return prod * CycNum.from_rat(Fraction(norm.denominator, norm.numerator))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = CYC_ONE
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._n == o._n and self._d == o._d

    def __hash__(self):
        return hash((self._n, self._d))

    def __repr__(self):
        return "CycNum(%s)" % (format_scalar(self),)

    def to_complex(self) -> complex:
        return sum(v * _ZETA_COMPLEX[i] for i, v in enumerate(self._n)) / self._d


CYC_ZERO = CycNum([0] * 6)
CYC_ONE = CycNum([1, 0, 0, 0, 0, 0])


def gauss_sum() -> CycNum:
    """Quadratic Gauss sum g = sum_k zeta^(k^2); satisfies g^2 = -7."""
    g = CYC_ZERO
    for k in range(7):
        g = g + CycNum.zeta(k * k)
    return g


def complex_embed(a: CycNum) -> complex:
    """Embed under zeta -> exp(2*pi*i/7); the branch with Im(embed(g)) > 0."""
    return a.to_complex()


# ---------------------------------------------------------------------------
# sparse multivariate polynomials
# ---------------------------------------------------------------------------


class MPoly:
    """Sparse multivariate polynomial over Q(zeta_7).

    Terms map dense exponent tuples to nonzero CycNum coefficients.  Monomial
    order used for printing and leading terms is graded lexicographic.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exps, c in terms.items():
                if not isinstance(c, CycNum):
                    c = CycNum.from_rat(c)
                if not c.is_zero():
                    if len(exps) != nvars:
                        raise ValueError("exponent length mismatch")
                    clean[tuple(exps)] = c
        self.terms = clean

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "MPoly":
        return MPoly(nvars)

    @staticmethod
    def constant(nvars: int, c) -> "MPoly":
        return MPoly(nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(nvars: int, i: int) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return MPoly(nvars, {tuple(e): CYC_ONE})

    @staticmethod
    def monomial(nvars: int, exps, c=1) -> "MPoly":
        return MPoly(nvars, {tuple(exps): c})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def coefficient(self, exps) -> CycNum:
        return self.terms.get(tuple(exps), CYC_ZERO)

    def sorted_terms(self):
        """Terms in decreasing graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def leading_coefficient(self) -> CycNum:
        if not self.terms:
            return CYC_ZERO
        return self.sorted_terms()[0][1]

    # -- ring operations ----------------------------------------------------

    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            other = MPoly.constant(self.nvars, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, CYC_ZERO) + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return MPoly(self.nvars, out)

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            other = MPoly.constant(self.nvars, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            c = other if isinstance(other, CycNum) else CycNum.from_rat(other)
            return MPoly(self.nvars, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, CYC_ZERO) + c1 * c2
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = MPoly.constant(self.nvars, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, MPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return "MPoly(%d, %s)" % (self.nvars, format_poly(self))

    # -- substitution and evaluation ----------------------------------------

    def substitute(self, images: Sequence["MPoly"]) -> "MPoly":
        """Replace variable i by images[i]; all images share a variable count."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        nv = images[0].nvars if images else self.nvars
        out = MPoly.zero(nv)
        # cache powers of each image
        pows: list[dict[int, MPoly]] = [dict() for _ in range(self.nvars)]
        for e, c in self.terms.items():
            term = MPoly.constant(nv, c)
            for i, a in enumerate(e):
                if a == 0:
                    continue
                p = pows[i].get(a)
                if p is None:
                    p = images[i] ** a
                    pows[i][a] = p
                term = term * p
            out = out + term
        return out

    def evaluate(self, point: Sequence[CycNum]) -> CycNum:
        """Exact evaluation at a CycNum vector."""
        total = CYC_ZERO
        for e, c in self.terms.items():
            v = c
            for i, a in enumerate(e):
                if a:
                    v = v * (point[i] ** a)
            total = total + v
        return total

    def evaluate_complex(self, point) -> complex:
        total = 0j
        for e, c in self.terms.items():
            v = c.to_complex()
            for i, a in enumerate(e):
                if a:
                    v *= point[i] ** a
            total += v
        return total

    def coefficient_vector(self, monomials: Sequence[tuple]) -> list:
        return [self.terms.get(m, CYC_ZERO) for m in monomials]


def monomials_of_degree(nvars: int, deg: int) -> list:
    """All exponent tuples of the given total degree, graded-lex descending."""
    out = []
    for bars in combinations(range(deg + nvars - 1), nvars - 1):
        prev = -1
        exps = []
        for b in bars:
            exps.append(b - prev - 1)
            prev = b
        exps.append(deg + nvars - 2 - prev)
        out.append(tuple(exps))
    out.sort(reverse=True)
    return out


def poly_apply_linear(P: MPoly, M: "ExactMatrix") -> MPoly:
    """Substitute x_i -> sum_j M[i][j] x_j.

    This is a right action: apply(apply(P, A), B) == apply(P, A*B).
    """
    if M.rows != M.cols or M.rows != P.nvars:
        raise ValueError("matrix shape does not match variable count")
    images = []
    for i in range(P.nvars):
        images.append(MPoly(P.nvars, {tuple(int(j == k) for k in range(P.nvars)): M.entry(i, j)
                                      for j in range(P.nvars) if not M.entry(i, j).is_zero()}))
    return P.substitute(images)


# ---------------------------------------------------------------------------
# exact dense linear algebra
# ---------------------------------------------------------------------------


class ExactMatrix:
    """Dense matrix over Q(zeta_7) with exact elimination."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries: Sequence[Sequence]):
        rows = []
        width = None
        for r in entries:
            row = tuple(c if isinstance(c, CycNum) else CycNum.from_rat(c) for c in r)
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ValueError("ragged rows")
            rows.append(row)
        self._e = tuple(rows)
        self.rows = len(rows)
        self.cols = width or 0

    @staticmethod
    def identity(n: int) -> "ExactMatrix":
        return ExactMatrix([[CYC_ONE if i == j else CYC_ZERO for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(r: int, c: int) -> "ExactMatrix":
        return ExactMatrix([[CYC_ZERO] * c for _ in range(r)])

    def entry(self, i: int, j: int) -> CycNum:
        return self._e[i][j]

    def row(self, i: int) -> tuple:
        return self._e[i]

    def column(self, j: int) -> list:
        return [self._e[i][j] for i in range(self.rows)]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([[self._e[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            bt = other.transpose()
            out = []
            for i in range(self.rows):
                ri = self._e[i]
                orow = []
                for j in range(other.cols):
                    cj = bt._e[j]
                    s = CYC_ZERO
                    for a, b in zip(ri, cj):
                        if not (a.is_zero() or b.is_zero()):
                            s = s + a * b
                    orow.append(s)
                out.append(orow)
            return ExactMatrix(out)
        if isinstance(other, (int, Fraction, CycNum)):
            c = other if isinstance(other, CycNum) else CycNum.from_rat(other)
            return ExactMatrix([[v * c for v in row] for row in self._e])
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")
        return ExactMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self._e, other._e)])

    def __sub__(self, other):
        return self + (other * CycNum.from_rat(-1))

    def __neg__(self):
        return self * CycNum.from_rat(-1)

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self._e == other._e

    def __hash__(self):
        return hash(self._e)

    def __repr__(self):
        return "ExactMatrix(%dx%d)" % (self.rows, self.cols)

    def apply(self, vec: Sequence[CycNum]) -> list:
        return [sum((self._e[i][j] * vec[j] for j in range(self.cols)), CYC_ZERO)
                for i in range(self.rows)]

    # -- elimination ------------------------------------------------------

    def rref(self):
        """Reduced row echelon form; returns (rows, pivot column indices)."""
        m = [list(r) for r in self._e]
        pivots = []
        prow = 0
        for col in range(self.cols):
            sel = None
            for r in range(prow, self.rows):
                if not m[r][col].is_zero():
                    sel = r
                    break
            if sel is None:
                continue
            m[prow], m[sel] = m[sel], m[prow]
            inv = m[prow][col].inverse()
            m[prow] = [v * inv for v in m[prow]]
            for r in range(self.rows):
                if r != prow and not m[r][col].is_zero():
                    f = m[r][col]
                    m[r] = [a - f * b for a, b in zip(m[r], m[prow])]
            pivots.append(col)
            prow += 1
            if prow == self.rows:
                break
        return m, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> list:
        """Exact basis of the right kernel, as lists of CycNum."""
        m, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for fc in free:
            v = [CYC_ZERO] * self.cols
            v[fc] = CYC_ONE
            for prow, pcol in enumerate(pivots):
                v[pcol] = -m[prow][fc]
            basis.append(v)
        return basis

    def solve(self, rhs: Sequence[CycNum]):
        """One exact solution of self * x = rhs, or None if inconsistent."""
        aug = ExactMatrix([list(self._e[i]) + [rhs[i]] for i in range(self.rows)])
        m, pivots = aug.rref()
        if self.cols in pivots:
            return None
        x = [CYC_ZERO] * self.cols
        for prow, pcol in enumerate(pivots):
            x[pcol] = m[prow][self.cols]
        return x

    def inverse(self) -> "ExactMatrix":
        if self.rows != self.cols:
            raise ValueError("not square")
        n = self.rows
        aug = ExactMatrix([list(self._e[i]) + [CYC_ONE if j == i else CYC_ZERO for j in range(n)]
                           for i in range(n)])
        m, pivots = aug.rref()
        if pivots != list(range(n)):
            raise InvalidScalar("matrix is singular")
        return ExactMatrix([row[n:] for row in m])

    def det(self) -> CycNum:
        if self.rows != self.cols:
            raise ValueError("not square")
        m = [list(r) for r in self._e]
        n = self.rows
        d = CYC_ONE
        for col in range(n):
            sel = None
            for r in range(col, n):
                if not m[r][col].is_zero():
                    sel = r
                    break
            if sel is None:
                return CYC_ZERO
            if sel != col:
                m[col], m[sel] = m[sel], m[col]
                d = -d
            d = d * m[col][col]
            inv = m[col][col].inverse()
            for r in range(col + 1, n):
                if not m[r][col].is_zero():
                    f = m[r][col] * inv
                    m[r] = [a - f * b for a, b in zip(m[r], m[col])]
        return d

    def to_complex(self):
        import numpy as np

        return np.array([[v.to_complex() for v in row] for row in self._e], dtype=complex)


def exact_rank(M: ExactMatrix) -> int:
    return M.rank()


def exact_kernel(M: ExactMatrix) -> list:
    return M.kernel_basis()


def row_space_signature(M: ExactMatrix):
    """Canonical form of the row space; equal iff the spans are equal."""
    m, pivots = M.rref()
    return tuple(tuple(row) for row in m[: len(pivots)])


# ---------------------------------------------------------------------------
# polynomial text format
# ---------------------------------------------------------------------------
#
#   poly   := term ( '+' term )*
#   term   := coef [ '*' monom ]
#   monom  := 'x<i>^<a>' ( '*' 'x<i>^<a>' )*
#   coef   := rational | '(' rational{6, comma-separated} ')'
#
# Whitespace-insensitive.  The printer emits graded-lex descending terms and
# parse(format(p)) == p holds bit-exactly.


def format_scalar(c: CycNum) -> str:
    if c.is_rational():
        return str(c.as_rat())
    return "(%s)" % ",".join(str(q) for q in c.coeffs)


def format_poly(p: MPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for exps, c in p.sorted_terms():
        mon = "*".join("x%d^%d" % (i, a) for i, a in enumerate(exps) if a)
        if mon:
            parts.append("%s * %s" % (format_scalar(c), mon))
        else:
            parts.append(format_scalar(c))
    return " + ".join(parts)


def _split_top_level(s: str, sep: str) -> list:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_scalar(s: str) -> CycNum:
    s = s.strip()
    if s.startswith("("):
        if not s.endswith(")"):
            raise ValueError("unbalanced parentheses in scalar: %r" % s)
        entries = s[1:-1].split(",")
        if len(entries) != 6:
            raise ValueError("cyclotomic scalar needs 6 entries: %r" % s)
        return CycNum.from_coeffs([Fraction(e) for e in entries])
    return CycNum.from_rat(Fraction(s))


def parse_poly(s: str, nvars: int) -> MPoly:
    s = "".join(s.split())
    if s in ("", "0"):
        return MPoly.zero(nvars)
    total = MPoly.zero(nvars)
    for term in _split_top_level(s, "+"):
        factors = _split_top_level(term, "*")
        coef = parse_scalar(factors[0])
        exps = [0] * nvars
        for f in factors[1:]:
            if not f.startswith("x") or "^" not in f:
                raise ValueError("bad monomial factor: %r" % f)
            idx, _, power = f[1:].partition("^")
            i, a = int(idx), int(power)
            if i >= nvars:
                raise ValueError("variable index out of range: %r" % f)
            exps[i] += a
        total = total + MPoly.monomial(nvars, exps, coef)
    return total

"""Exact arithmetic over a fixed prime basis.

Labels and moduli are stored as sign, a unit part coprime to the basis, and a
vector of prime exponents.  Also here: an exact integer linear system solver
(column-style Hermite reduction) and a lattice-point feasibility test for
small systems of linear inequalities.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce as _fold
from math import gcd, lcm, floor, ceil

from sympy import factorint

from .decision import Yes, No, Inconclusive
from .errors import ZeroLabel, BasisMismatch, DimensionMismatch, LabelTooLarge

DIGIT_LIMIT = 18


def check_label(n, digit_limit=DIGIT_LIMIT):
    if n == 0:
        raise ZeroLabel("label 0 is not allowed")
    if len(str(abs(n))) > digit_limit:
        raise LabelTooLarge(f"label {n} exceeds {digit_limit} digits")
    return n


def prime_basis(*numbers):
    """Sorted tuple of every prime dividing any of the given nonzero integers."""
    primes = set()
    for n in numbers:
        if n == 0:
            raise ZeroLabel("cannot build a basis from 0")
        primes.update(factorint(abs(n)))
    return tuple(sorted(primes))


@dataclass(frozen=True)
class FactoredInt:
    sign: int
    unit: int
    exps: tuple
    basis: tuple

    @property
    def value(self):
        v = self.sign * self.unit
        for p, k in zip(self.basis, self.exps):
            v *= p**k
        return v

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class FactoredRational:
    sign: int
    num_unit: int
    den_unit: int
    exps: tuple
    basis: tuple

    @property
    def value(self):
        v = Fraction(self.sign * self.num_unit, self.den_unit)
        for p, k in zip(self.basis, self.exps):
            v *= Fraction(p) ** k
        return v

    def is_integer(self):
        return self.den_unit == 1 and all(k >= 0 for k in self.exps)

    def is_unit_modulus(self):
        return self.num_unit == 1 and self.den_unit == 1 and not any(self.exps)


def _split(n, basis):
    exps = []
    for p in basis:
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        exps.append(k)
    return n, tuple(exps)


def factor(n, basis, digit_limit=DIGIT_LIMIT):
    check_label(n, digit_limit)
    basis = tuple(basis)
    unit, exps = _split(abs(n), basis)
    return FactoredInt(1 if n > 0 else -1, unit, exps, basis)


def factor_rational(q, basis):
    q = Fraction(q)
    if q == 0:
        raise ZeroLabel("modulus 0")
    basis = tuple(basis)
    nu, ne = _split(abs(q.numerator), basis)
    du, de = _split(q.denominator, basis)
    return FactoredRational(1 if q > 0 else -1, nu, du,
                            tuple(a - b for a, b in zip(ne, de)), basis)


def divides(a, b, ignore_sign=True):
    """a | b over the integers.

    Divisibility never depends on signs; ``ignore_sign=False`` additionally
    asks that the quotient be positive.
    """
    if a.basis != b.basis:
        raise BasisMismatch(f"{a.basis} vs {b.basis}")
    if b.unit % a.unit:
        return False
    if any(x > y for x, y in zip(a.exps, b.exps)):
        return False
    return ignore_sign or a.sign == b.sign


# -- integer linear systems ---------------------------------------------------

def _column_echelon(A):
    """Return (H, U, pivots) with H = A·U, U unimodular, H in column echelon form.

    pivots[i] is the pivot column for row i or None when row i adds no pivot.
    """
    r, d = len(A), len(A[0])
    H = [list(row) for row in A]
    U = [[int(i == j) for j in range(d)] for i in range(d)]

    def colop(dst, src, k):  # col[dst] -= k * col[src]
        for row in H:
            row[dst] -= k * row[src]
        for row in U:
            row[dst] -= k * row[src]

    def swap(i, j):
        for row in H:
            row[i], row[j] = row[j], row[i]
        for row in U:
            row[i], row[j] = row[j], row[i]

    pivots = []
    col = 0
    for i in range(r):
        if col >= d:
            pivots.append(None)
            continue
        while True:
            nz = [c for c in range(col, d) if H[i][c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda c: abs(H[i][c]))
            if best != col:
                swap(best, col)
            done = True
            for c in range(col + 1, d):
                if H[i][c]:
                    colop(c, col, H[i][c] // H[i][col])
                    if H[i][c]:
                        done = False
            if done:
                break
        if H[i][col] == 0:
            pivots.append(None)
            continue
        pivots.append(col)
        col += 1
    return H, U, pivots


def solve_integer_linear(A, b):
    """Exact integer solution of A·y = b, or No when none exists."""
    if not A or not A[0]:
        raise DimensionMismatch("need at least one row and one column")
    d = len(A[0])
    if any(len(row) != d for row in A) or len(b) != len(A):
        raise DimensionMismatch("ragged matrix or wrong right-hand side length")
    H, U, pivots = _column_echelon(A)
    z = [0] * d
    for i, p in enumerate(pivots):
        acc = sum(H[i][c] * z[c] for c in range(d) if c != p)
        if p is None:
            if acc != b[i]:
                return No("inconsistent row %d" % i)
            continue
        rest = b[i] - acc
        if rest % H[i][p]:
            return No("row %d has no integer solution" % i)
        z[p] = rest // H[i][p]
    y = [sum(U[j][c] * z[c] for c in range(d)) for j in range(d)]
    return Yes(y)


def hermite_rows(vectors):
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Two generating sets span the same lattice iff their forms are equal.
    """
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return ()
    n = len(vectors[0])
    rows = vectors
    out = []
    col = 0
    while rows and col < n:
        nz = [r for r in rows if r[col]]
        zero = [r for r in rows if not r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            nxt = [piv]
            for r in nz[1:]:
                k = r[col] // piv[col]
                r = [x - k * y for x, y in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    zero.append(r)
            nz = nxt
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        rows = zero
        col += 1
    # reduce entries above each pivot into [0, pivot)
    for i in range(len(out)):
        c = next(j for j, x in enumerate(out[i]) if x)
        for k in range(i):
            q = out[k][c] // out[i][c]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], out[i])]
    return tuple(tuple(r) for r in out)


# -- lattice-point feasibility ------------------------------------------------

GE = ">="
EQ = "="


@dataclass(frozen=True)
class Row:
    coeffs: tuple
    rhs: int
    rel: str = GE


@dataclass(frozen=True)
class LinearConstraintSystem:
    dim: int
    rows: tuple
    bound: int = None

    def __post_init__(self):
        for row in self.rows:
            if len(row.coeffs) != self.dim:
                raise DimensionMismatch(f"row {row} does not have {self.dim} coefficients")

    def satisfied_by(self, x):
        for row in self.rows:
            v = sum(a * b for a, b in zip(row.coeffs, x))
            if row.rel == EQ and v != row.rhs:
                return False
            if row.rel == GE and v < row.rhs:
                return False
        if self.bound is not None and any(abs(t) > self.bound for t in x):
            return False
        return True


def _inequalities(sys):
    rows = []
    for row in sys.rows:
        rows.append((tuple(row.coeffs), row.rhs))
        if row.rel == EQ:
            rows.append((tuple(-a for a in row.coeffs), -row.rhs))
    if sys.bound is not None:
        for i in range(sys.dim):
            e = tuple(int(i == j) for j in range(sys.dim))
            rows.append((e, -sys.bound))
            rows.append((tuple(-t for t in e), -sys.bound))
    return rows


def _interval_1d(rows):
    """Integer interval [lo, hi] (None for unbounded) of a·x >= c rows, or None if empty."""
    lo, hi = None, None
    for (a,), c in rows:
        if a == 0:
            if c > 0:
                return None
        elif a > 0:
            v = -((-c) // a)  # ceil(c / a)
            lo = v if lo is None else max(lo, v)
        else:
            v = (-c) // (-a)  # floor(c / a) for negative a
            hi = v if hi is None else min(hi, v)
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def _point_in(lo, hi):
    if lo is not None:
        return lo
    if hi is not None:
        return min(hi, 0)
    return 0


def _feasible_2d(rows):
    """Exact integer feasibility for two variables.

    The real projection onto x is split at every crossing of two lower (or two
    upper) bound lines for y.  Inside each piece the active bounds are fixed
    lines whose values shift by integers when x moves by their common
    denominator, so one period per piece decides it.
    """
    xonly, lower, upper = [], [], []
    for (a1, a2), c in rows:
        if a2 == 0:
            xonly.append(((a1,), c))
        elif a2 > 0:
            lower.append((Fraction(c, a2), Fraction(-a1, a2)))  # y >= c/a2 - (a1/a2) x
        else:
            upper.append((Fraction(c, a2), Fraction(-a1, a2)))  # y <= ...
    # real projection on x: x-only rows plus every lower <= upper pair
    proj = list(xonly)
    for lc, ls in lower:
        for uc, us in upper:
            # lc + ls x <= uc + us x  ->  (us - ls) x >= lc - uc
            a, c = us - ls, lc - uc
            den = lcm(a.denominator, c.denominator)
            proj.append(((int(a * den),), int(c * den)))
    iv = _interval_1d(proj)
    if iv is None:
        return None
    xlo, xhi = iv

    def ylimits(x):
        lo = max((ceil(c + s * x) for c, s in lower), default=None)
        hi = min((floor(c + s * x) for c, s in upper), default=None)
        return lo, hi

    def try_x(x):
        for (a,), c in xonly:
            if a * x < c:
                return None
        lo, hi = ylimits(x)
        if lo is not None and hi is not None and lo > hi:
            return None
        return (x, _point_in(lo, hi))

    if not lower or not upper:
        # y is unbounded on one side: any x in the projection works
        x = _point_in(xlo, xhi)
        return try_x(x)

    cuts = set()
    for group in (lower, upper):
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                (c1, s1), (c2, s2) = group[i], group[j]
                if s1 != s2:
                    t = (c2 - c1) / (s1 - s2)
                    cuts.update((floor(t), ceil(t)))
    period = 1
    for _, s in lower + upper:
        period = lcm(period, s.denominator)
    points = sorted(t for t in cuts if (xlo is None or t >= xlo) and (xhi is None or t <= xhi))
    edges = ([xlo] if xlo is not None else [None]) + points + ([xhi] if xhi is not None else [None])
    span = 2 * period + 2
    for left, right in zip(edges, edges[1:]):
        if left is None and right is None:
            candidates = range(-span, span + 1)
        elif left is None:
            candidates = range(right - span, right + 1)
        elif right is None:
            candidates = range(left, left + span + 1)
        elif right - left <= 2 * span:
            candidates = range(left, right + 1)
        else:
            candidates = list(range(left, left + span + 1)) + list(range(right - span, right + 1))
        for x in candidates:
            got = try_x(x)
            if got is not None:
                return got
        # a gap that widens with |x| eventually holds an integer
        if left is None or right is None:
            got = _far_point(lower, upper, try_x, left, right, span)
            if got is not None:
                return got
    return None


def _far_point(lower, upper, try_x, left, right, span):
    direction = 1 if right is None else -1
    start = left if right is None else right
    if start is None:
        start = 0
    x0 = start + direction * span
    # gap(x) = min upper - max lower; on the far piece both are fixed lines
    lo_line = max(lower, key=lambda l: l[0] + l[1] * x0)
    hi_line = min(upper, key=lambda u: u[0] + u[1] * x0)
    slope = (hi_line[1] - lo_line[1]) * direction
    if slope <= 0:
        return None
    gap = (hi_line[0] + hi_line[1] * x0) - (lo_line[0] + lo_line[1] * x0)
    steps = max(0, ceil((1 - gap) / slope))
    return try_x(x0 + direction * steps)


def ilp_feasible(sys, bound=64):
    """Find an integer point satisfying every row of ``sys``.

    Exact for dimension at most two.  Higher dimensions branch on the first
    variable inside [-B, B] (B = sys.bound or ``bound``) and report
    Inconclusive when the search had to cut the real range.
    """
    rows = _inequalities(sys)
    d = sys.dim
    if d == 0:
        ok = all(c <= 0 for _, c in rows)
        return Yes(()) if ok else No("a constant row is violated")
    if any(not any(a) and c > 0 for a, c in rows):
        return No("a constant row is violated")
    if d == 1:
        iv = _interval_1d(rows)
        if iv is None:
            return No("empty interval")
        return Yes((_point_in(*iv),))
    if d == 2:
        got = _feasible_2d(rows)
        return Yes(got) if got is not None else No("no lattice point")
    return _branch(rows, d, sys.bound if sys.bound is not None else bound)


def _substitute(rows, value):
    return [(a[1:], c - a[0] * value) for a, c in rows]


def _real_range_first(rows, d):
    """Fourier-Motzkin projection of the rows onto the first variable."""
    cur = [(tuple(Fraction(x) for x in a), Fraction(c)) for a, c in rows]
    for k in range(d - 1, 0, -1):
        pos = [r for r in cur if r[0][k] > 0]
        neg = [r for r in cur if r[0][k] < 0]
        nxt = [r for r in cur if r[0][k] == 0]
        for ap, cp in pos:
            for an, cn in neg:
                sp, sn = ap[k], -an[k]
                nxt.append((tuple(sn * x + sp * y for x, y in zip(ap, an)), sn * cp + sp * cn))
        cur = nxt
        if len(cur) > 4000:
            return None
    lo, hi = None, None
    for a, c in cur:
        if a[0] > 0:
            v = ceil(c / a[0])
            lo = v if lo is None else max(lo, v)
        elif a[0] < 0:
            v = floor(c / a[0])
            hi = v if hi is None else min(hi, v)
        elif c > 0:
            return "empty"
    return lo, hi


def _branch(rows, d, B):
    if d == 2:
        got = _feasible_2d(rows)
        return Yes(got) if got is not None else No("no lattice point")
    rng = _real_range_first(rows, d)
    if rng == "empty":
        return No("real relaxation is empty")
    truncated = False
    if rng is None:
        lo, hi = -B, B
        truncated = True
    else:
        lo, hi = rng
        if lo is None or lo < -B:
            lo, truncated = -B, True
        if hi is None or hi > B:
            hi, truncated = B, True
    inconclusive = truncated
    for v in range(lo, hi + 1):
        sub = _branch(_substitute(rows, v), d - 1, B)
        if sub.yes:
            return Yes((v,) + tuple(sub.witness))
        if sub.inconclusive:
            inconclusive = True
    if inconclusive:
        return Inconclusive(f"searched first coordinate within [-{B}, {B}]", bound=B)
    return No("exhausted the projected range")


def gcd_all(values):
    return _fold(gcd, values, 0)

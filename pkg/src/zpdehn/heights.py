"""Weil heights of algebraic numbers via the Mahler measure.

The height of an algebraic number with primitive integer minimal
polynomial p (degree d, leading coefficient lc, roots z_1..z_d) is

    h = (1/d) * ( log|lc| + sum_{|z_i| > 1} log|z_i| ),

the normalized logarithmic Mahler measure; by the product formula this
agrees with the adelic definition without touching ideal factorization.
Rational numbers and rational tuples are computed exactly place by
place.  Root moduli are certified by inclusion radii; a root that cannot
be separated from the unit circle triggers precision doubling and then a
hard error, with one exact escape hatch: cyclotomic minimal polynomials
are recognized exactly (finitely many of each degree), and their height
is exactly zero.  By Kronecker's theorem those are precisely the
nonzero numbers of height zero, so the degenerate cases never reach the
numeric path.

Polynomials are stored as integer coefficient tuples in descending
degree order, normalized primitive with positive leading coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import gcd
from typing import Sequence

import mpmath as mp

from .errors import BudgetExceeded, FieldMismatch, PrecisionExhausted

IntPoly = tuple[int, ...]  # descending degree, no leading zero

_PRECISION_CAP = 4096


# ---------------------------------------------------------------------------
# integer polynomial helpers


def normalize_poly(coeffs: Sequence[int]) -> IntPoly:
    """Strip leading zeros, divide by content, make the lead positive."""
    c = [int(x) for x in coeffs]
    while c and c[0] == 0:
        c.pop(0)
    if not c:
        raise ValueError("zero polynomial")
    g = 0
    for x in c:
        g = gcd(g, x)
    c = [x // g for x in c]
    if c[0] < 0:
        c = [-x for x in c]
    return tuple(c)


def poly_degree(p: IntPoly) -> int:
    return len(p) - 1


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_divmod_q(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    while b and b[0] == 0:
        b.pop(0)
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = a[:]
    while len(r) >= len(b) and any(x != 0 for x in r):
        while r and r[0] == 0:
            r.pop(0)
        if len(r) < len(b):
            break
        f = r[0] / b[0]
        pos = len(r) - len(b)
        q[len(q) - 1 - pos] += f
        for i in range(len(b)):
            r[i] -= f * b[i]
    while r and r[0] == 0:
        r.pop(0)
    return q, r


def poly_gcd_q(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    while any(x != 0 for x in b):
        _, r = poly_divmod_q(a, b)
        a, b = b, r
    while a and a[0] == 0:
        a.pop(0)
    if a:
        lead = a[0]
        a = [x / lead for x in a]
    return a


def poly_to_int(p: Sequence[Fraction]) -> IntPoly:
    denom = 1
    for x in p:
        denom = denom * Fraction(x).denominator // gcd(denom, Fraction(x).denominator)
    return normalize_poly([int(Fraction(x) * denom) for x in p])


def squarefree_part(p: IntPoly) -> IntPoly:
    if len(p) <= 2:
        return p
    deriv = [c * (len(p) - 1 - i) for i, c in enumerate(p[:-1])]
    g = poly_gcd_q(list(p), deriv)
    if len(g) <= 1:
        return p
    q, r = poly_divmod_q(list(p), g)
    if any(x != 0 for x in r):
        raise AssertionError("gcd does not divide the polynomial")
    return poly_to_int(q)


def poly_divides(candidate: IntPoly, p: IntPoly) -> bool:
    """Exact divisibility over Q (equivalently over Z, both primitive)."""
    if len(candidate) > len(p):
        return False
    _, r = poly_divmod_q(list(p), list(candidate))
    return not any(x != 0 for x in r)


def reverse_poly(p: IntPoly) -> IntPoly:
    """x^d p(1/x); the minimal polynomial of the inverse when p(0) != 0."""
    if p[-1] == 0:
        raise ValueError("cannot invert a root of a polynomial with p(0) = 0")
    return normalize_poly(list(reversed(p)))


def negate_poly(p: IntPoly) -> IntPoly:
    """p(-x) up to sign; the minimal polynomial of the negated root."""
    d = len(p) - 1
    return normalize_poly([c if (d - i) % 2 == 0 else -c for i, c in enumerate(p)])


# ---------------------------------------------------------------------------
# cyclotomic recognition


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> IntPoly:
    if n == 1:
        return (1, -1)
    num = [1] + [0] * (n - 1) + [-1]  # x^n - 1
    coeffs = [Fraction(x) for x in num]
    for d in range(1, n):
        if n % d == 0:
            q, r = poly_divmod_q(coeffs, [Fraction(x) for x in cyclotomic_poly(d)])
            if any(x != 0 for x in r):
                raise AssertionError("cyclotomic division must be exact")
            coeffs = q
    return poly_to_int(coeffs)


@lru_cache(maxsize=None)
def _cyclotomics_of_degree(d: int) -> tuple[IntPoly, ...]:
    out = []
    n = 1
    while n <= 4 * d * d + 4:
        phi = sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)
        if phi == d:
            out.append(cyclotomic_poly(n))
        n += 1
    return tuple(out)


def is_cyclotomic(p: IntPoly) -> bool:
    return p in _cyclotomics_of_degree(poly_degree(p))


# ---------------------------------------------------------------------------
# roots with inclusion radii


def poly_roots(p: IntPoly, precision_bits: int) -> list[mp.mpc]:
    """Roots sorted by (re, im) at the working precision."""
    with mp.workprec(max(precision_bits, 64)):
        if len(p) == 1:
            return []
        roots = mp.polyroots([mp.mpf(c) for c in p], maxsteps=200, extraprec=precision_bits)
        roots = sorted((mp.mpc(r) for r in roots), key=lambda z: (mp.re(z), mp.im(z)))
    return roots


def _inclusion_radius(p: IntPoly, z: mp.mpc) -> mp.mpf:
    """Radius of a disk around z guaranteed to contain a root of p.

    Uses the classical bound d |p(z) / p'(z)|; for the clustered-root
    case p'(z) ~ 0 the radius degrades and forces a precision raise.
    """
    d = len(p) - 1
    pv = mp.polyval([mp.mpf(c) for c in p], z)
    dv = mp.polyval([mp.mpf(c * (d - i)) for i, c in enumerate(p[:-1])], z)
    if dv == 0:
        return mp.mpf("inf")
    return d * abs(pv) / abs(dv)


# ---------------------------------------------------------------------------
# core types


@dataclass(frozen=True)
class HeightValue:
    value: float
    error_bound: float

    def __post_init__(self):
        if self.value < 0 or self.error_bound < 0:
            raise ValueError("height and error bound must be non-negative")

    def agrees(self, other: "HeightValue", slack: float = 0.0) -> bool:
        return abs(self.value - other.value) <= self.error_bound + other.error_bound + slack


@dataclass(frozen=True)
class AlgebraicNumber:
    """Primitive integer minimal polynomial plus one distinguished root.

    root_index selects a root under the ordering by (real part,
    imaginary part) at reference precision.  Irreducibility is certified
    by trial factorization through degree 6; beyond that the polynomial
    is taken on trust and `trusted` is set.
    """

    minpoly: IntPoly
    root_index: int = 0
    precision_bits: int = 256
    trusted: bool = False

    def __post_init__(self):
        object.__setattr__(self, "minpoly", normalize_poly(self.minpoly))
        d = poly_degree(self.minpoly)
        if d < 1:
            raise ValueError("minimal polynomial must be nonconstant")
        if not 0 <= self.root_index < d:
            raise ValueError("root index out of range")
        if d <= 6:
            if not is_irreducible(self.minpoly):
                raise ValueError(f"{self.minpoly} is reducible over Q")
            object.__setattr__(self, "trusted", False)
        else:
            object.__setattr__(self, "trusted", True)

    @classmethod
    def from_rational(cls, value: Fraction | int, precision_bits: int = 256) -> "AlgebraicNumber":
        value = Fraction(value)
        return cls((value.denominator, -value.numerator), 0, precision_bits)

    @property
    def degree(self) -> int:
        return poly_degree(self.minpoly)

    def is_rational(self) -> bool:
        return self.degree == 1

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return Fraction(-self.minpoly[1], self.minpoly[0])

    def root_value(self, precision_bits: int | None = None) -> mp.mpc:
        bits = precision_bits or self.precision_bits
        return poly_roots(self.minpoly, bits)[self.root_index]

    def conjugates(self) -> list["AlgebraicNumber"]:
        return [
            AlgebraicNumber(self.minpoly, i, self.precision_bits)
            for i in range(self.degree)
        ]


def from_value(minpoly: Sequence[int], value: complex, precision_bits: int = 256) -> AlgebraicNumber:
    """AlgebraicNumber for the root of minpoly closest to value."""
    p = normalize_poly(minpoly)
    roots = poly_roots(p, precision_bits)
    idx = min(range(len(roots)), key=lambda i: abs(roots[i] - mp.mpc(value)))
    return AlgebraicNumber(p, idx, precision_bits)


# ---------------------------------------------------------------------------
# irreducibility (degree <= 6)


def _rational_roots(p: IntPoly) -> list[Fraction]:
    lead, const = p[0], p[-1]
    if const == 0:
        return [Fraction(0)]
    out = []

    def divisors(n):
        n = abs(n)
        return [d for d in range(1, n + 1) if n % d == 0]

    for num in divisors(const):
        for den in divisors(lead):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                acc = Fraction(0)
                for c in p:
                    acc = acc * cand + c
                if acc == 0 and cand not in out:
                    out.append(cand)
    return out


def is_irreducible(p: IntPoly) -> bool:
    """Trial factorization over Z for degree <= 6.

    Linear factors come from the rational root theorem; higher-degree
    factors are reconstructed from subsets of high-precision roots and
    certified by exact polynomial division.
    """
    p = normalize_poly(p)
    d = poly_degree(p)
    if d == 1:
        return True
    if d > 6:
        raise BudgetExceeded("trial factorization limited to degree 6")
    if p[-1] == 0:
        return False  # divisible by x, and d >= 2
    if _rational_roots(p):
        return False
    if d <= 3:
        return True  # no rational root and degree <= 3
    bits = 240
    roots = poly_roots(p, bits)
    lead = p[0]
    lead_divisors = [k for k in range(1, abs(lead) + 1) if lead % k == 0]
    with mp.workprec(bits):
        for size in range(2, d // 2 + 1):
            for subset in combinations(range(d), size):
                monic = [mp.mpf(1)]
                for i in subset:
                    monic = _mul_monic(monic, roots[i])
                for c in lead_divisors:
                    cand = []
                    good = True
                    for coef in monic:
                        scaled = c * coef
                        rounded = mp.nint(mp.re(scaled))
                        if abs(scaled - rounded) > mp.mpf("1e-10"):
                            good = False
                            break
                        cand.append(int(rounded))
                    if not good:
                        continue
                    try:
                        cand_poly = normalize_poly(cand)
                    except ValueError:
                        continue
                    if poly_degree(cand_poly) == size and poly_divides(cand_poly, p):
                        return False
    return True


def _mul_monic(coeffs: list, root) -> list:
    out = [mp.mpc(0)] * (len(coeffs) + 1)
    for i, c in enumerate(coeffs):
        out[i] += c
        out[i + 1] -= c * root
    return out


# ---------------------------------------------------------------------------
# heights


def weil_height(a: AlgebraicNumber) -> HeightValue:
    """Normalized log Mahler measure of the minimal polynomial.

    Exact for rationals and for cyclotomic minimal polynomials; for the
    rest, roots are certified against the unit circle by inclusion
    radii, doubling the working precision up to a cap before giving up
    with PrecisionExhausted.
    """
    return _mahler_height(a.minpoly, a.precision_bits)


def _mahler_height(p: IntPoly, precision_bits: int) -> HeightValue:
    d = poly_degree(p)
    if d == 1:
        value = math.log(max(abs(p[0]), abs(p[1]), 1))
        return HeightValue(value, 1e-15)
    if is_cyclotomic(p):
        return HeightValue(0.0, 0.0)
    if p == p[::-1]:
        # an irreducible polynomial with a root exactly on the unit circle
        # is self-reciprocal; handle that case through y = x + 1/x, where
        # circle membership is an exact real-root decision
        return _mahler_palindromic(p, precision_bits)
    bits = max(precision_bits, 128)
    while True:
        with mp.workprec(bits):
            roots = poly_roots(p, bits)
            radii = [_inclusion_radius(p, z) for z in roots]
            separated = True
            total = mp.log(abs(p[0]))
            err = mp.mpf(0)
            for z, rad in zip(roots, radii):
                az = abs(z)
                if az - rad > 1:
                    total += mp.log(az)
                    err += rad / (az - rad)
                elif az + rad < 1:
                    pass
                else:
                    separated = False
                    break
            if separated:
                return HeightValue(float(total / d), float(err / d + mp.mpf("1e-15")))
        bits *= 2
        if bits > _PRECISION_CAP:
            raise PrecisionExhausted(
                f"roots of {p} cannot be separated from the unit circle at "
                f"{_PRECISION_CAP} bits"
            )


def _sturm_chain(q: Sequence[Fraction]) -> list[list[Fraction]]:
    chain = [[Fraction(x) for x in q]]
    d = len(q) - 1
    deriv = [Fraction(c * (d - i)) for i, c in enumerate(q[:-1])]
    if deriv:
        chain.append(deriv)
    while len(chain[-1]) > 1:
        _, rem = poly_divmod_q(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-x for x in rem])
    return chain


def _sign_changes(chain: list[list[Fraction]], x: Fraction) -> int:
    signs = []
    for poly in chain:
        acc = Fraction(0)
        for c in poly:
            acc = acc * x + c
        if acc != 0:
            signs.append(1 if acc > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _real_roots_count(chain, lo: Fraction, hi: Fraction) -> int:
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def _isolate_real_roots(q: list[Fraction]) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals, one simple real root of q in each."""
    lead = q[0]
    bound = Fraction(1) + max((abs(c / lead) for c in q[1:]), default=Fraction(0))
    chain = _sturm_chain(q)
    intervals = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        count = _real_roots_count(chain, lo, hi)
        if count == 0:
            continue
        if count == 1:
            intervals.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        # nudge off a root at the midpoint
        acc = Fraction(0)
        for c in q:
            acc = acc * mid + c
        if acc == 0:
            eps = (hi - lo) / 1024
            intervals.append((mid - eps, mid + eps))
            stack.append((lo, mid - eps))
            stack.append((mid + eps, hi))
            continue
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(intervals)


def _refine_root(q: list[Fraction], lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    def val(x):
        acc = Fraction(0)
        for c in q:
            acc = acc * x + c
        return acc

    flo = val(lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = val(mid)
        if fm == 0:
            eps = width / 4
            return (mid - eps, mid + eps)
        if (flo > 0) == (fm > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def _mahler_palindromic(p: IntPoly, precision_bits: int) -> HeightValue:
    """Mahler measure of an irreducible self-reciprocal polynomial.

    With p(x) = x^k q(x + 1/x), every root y of q spawns the root pair of
    x^2 - y x + 1: real y in (-2, 2) puts the pair exactly on the unit
    circle (contribution 1); real |y| > 2 gives a real reciprocal pair;
    non-real y gives an off-circle complex pair.  Realness of y and the
    comparison with +-2 are decided exactly over Q.
    """
    d = poly_degree(p)
    if d % 2 != 0:
        # an odd-degree palindrome vanishes at -1, contradicting irreducibility
        raise AssertionError(f"odd-degree palindrome {p} should be reducible")
    k = d // 2
    # x^j + x^-j = T_j(y):  T_0 = 2, T_1 = y, T_j = y T_{j-1} - T_{j-2}
    t_prev = [Fraction(2)]
    t_cur = [Fraction(1), Fraction(0)]
    t_polys = [t_prev, t_cur]
    for _ in range(2, k + 1):
        nxt = [Fraction(0)] * (len(t_cur) + 1)
        for i, c in enumerate(t_cur):
            nxt[i] += c
        for i, c in enumerate(t_prev):
            nxt[len(nxt) - len(t_prev) + i] -= c
        t_polys.append(nxt)
        t_prev, t_cur = t_cur, nxt
    q = [Fraction(0)] * (k + 1)
    q[-1] += p[k]  # the central coefficient appears once
    for j in range(1, k + 1):
        tj = t_polys[j]
        for i, c in enumerate(tj):
            q[len(q) - len(tj) + i] += p[k - j] * c
    while q and q[0] == 0:
        q.pop(0)
    if len(q) - 1 != k:
        raise AssertionError("y-reduction lost degree")
    if any(_poly_val_q(q, Fraction(s)) == 0 for s in (2, -2)):
        raise AssertionError(f"palindrome {p} has root ±1, contradicting irreducibility")

    real_intervals = _isolate_real_roots(q)
    log_m = mp.log(abs(p[0]))
    err = mp.mpf(0)
    with mp.workprec(max(precision_bits, 128)):
        width = Fraction(1, 2**80)
        real_mids = []
        for lo, hi in real_intervals:
            # refine until the interval clears +-2
            while (lo < 2 < hi) or (lo < -2 < hi):
                lo, hi = _refine_root(q, lo, hi, (hi - lo) / 4)
            lo, hi = _refine_root(q, lo, hi, width)
            real_mids.append((lo + hi) / 2)
            if hi <= 2 and lo >= -2:
                continue  # unit-circle pair, contributes 1 exactly
            y = mp.mpf(lo.numerator) / lo.denominator
            big = (abs(y) + mp.sqrt(y * y - 4)) / 2
            log_m += mp.log(big)
            err += mp.mpf(1e-20)
        # complex roots of q: all numeric roots away from the real intervals
        n_complex = k - len(real_intervals)
        if n_complex:
            all_roots = poly_roots(poly_to_int(q), max(precision_bits, 128))
            complex_roots = sorted(all_roots, key=lambda z: abs(mp.im(z)), reverse=True)[:n_complex]
            for y in complex_roots:
                if abs(mp.im(y)) == 0:
                    raise PrecisionExhausted(
                        f"complex/real root separation failed for {p}"
                    )
                disc = mp.sqrt(y * y - 4)
                x1 = (y + disc) / 2
                x2 = (y - disc) / 2
                big = max(abs(x1), abs(x2))
                log_m += mp.log(big)
                err += mp.mpf(1e-18)
        return HeightValue(float(log_m / d), float(err / d + mp.mpf("1e-15")))


def _poly_val_q(q: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in q:
        acc = acc * x + c
    return acc


def power_minpoly(a: AlgebraicNumber, n: int) -> IntPoly:
    """Exact minimal polynomial of a^n (n != 0).

    The characteristic polynomial of the n-th power of the companion
    matrix is computed exactly over Q (traces and Newton's identities);
    its squarefree part is the minimal polynomial.
    """
    if n == 0:
        raise ValueError("n must be nonzero")
    p = a.minpoly
    if n < 0:
        p = reverse_poly(p)
        n = -n
    if n == 1:
        return p
    d = poly_degree(p)
    lead = Fraction(p[0])
    comp = [[Fraction(0)] * d for _ in range(d)]
    for i in range(1, d):
        comp[i][i - 1] = Fraction(1)
    for i in range(d):
        comp[i][d - 1] = -Fraction(p[d - i]) / lead

    def mat_mul(x, y):
        return [
            [sum(x[i][k] * y[k][j] for k in range(d)) for j in range(d)]
            for i in range(d)
        ]

    power = [[Fraction(1) if i == j else Fraction(0) for j in range(d)] for i in range(d)]
    base = comp
    e = n
    while e:
        if e & 1:
            power = mat_mul(power, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)

    traces = []
    cur = power
    for _ in range(d):
        traces.append(sum(cur[i][i] for i in range(d)))
        cur = mat_mul(cur, power)
    # Newton's identities: e_k = (1/k) sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i
    elem = [Fraction(1)]
    for k in range(1, d + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * elem[k - i] * traces[i - 1]
        elem.append(acc / k)
    charpoly = [(-1) ** k * elem[k] for k in range(d + 1)]
    return squarefree_part(poly_to_int(charpoly))


def power_height(a: AlgebraicNumber, n: int) -> HeightValue:
    """Height of a^n, through the exact minimal polynomial of the power."""
    if n == 0:
        return HeightValue(0.0, 0.0)
    return _mahler_height(power_minpoly(a, n), a.precision_bits)


# ---------------------------------------------------------------------------
# tuple heights


def tuple_height(numbers: Sequence[AlgebraicNumber]) -> HeightValue:
    """Height of a tuple in a single field presentation.

    Supported presentations: all entries rational (exact adelic
    computation over Q), or all entries equal (the height of the common
    value).  Anything else raises FieldMismatch; general number-field
    places are out of scope.
    """
    if not numbers:
        raise ValueError("empty tuple")
    if all(x.is_rational() for x in numbers):
        values = [x.as_rational() for x in numbers]
        denom_lcm = 1
        for v in values:
            denom_lcm = denom_lcm * v.denominator // gcd(denom_lcm, v.denominator)
        finite = math.log(denom_lcm)
        infinite = math.log(max(1.0, max(abs(float(v)) for v in values)))
        # recompute the archimedean part exactly when some |v| >= 1
        best = max((abs(v) for v in values), default=Fraction(0))
        if best > 1:
            infinite = math.log(best.numerator) - math.log(best.denominator)
        else:
            infinite = 0.0
        return HeightValue(finite + infinite, 1e-12)
    first = numbers[0]
    if all(
        x.minpoly == first.minpoly and x.root_index == first.root_index
        for x in numbers
    ):
        return weil_height(first)
    raise FieldMismatch(
        "tuple heights support rational tuples or repeated entries only"
    )


# ---------------------------------------------------------------------------
# bounded enumeration


def northcott_enumerate(h_max: float, d_max: int, precision_bits: int = 256) -> list[AlgebraicNumber]:
    """All algebraic numbers with degree <= d_max and height <= h_max.

    Candidate minimal polynomials are enumerated inside the Mahler
    coefficient box |a_i| <= binom(d, floor(d/2)) e^(d h_max) and kept
    when irreducible with height <= h_max (+1e-12 comparison slack, so
    exact boundary cases are included).  Every root of a qualifying
    polynomial is listed.
    """
    if d_max > 3:
        raise BudgetExceeded("enumeration limited to degree 3")
    if h_max > math.log(3) + 1e-9:
        raise BudgetExceeded("enumeration limited to height log 3")
    if h_max < 0:
        raise ValueError("height bound must be non-negative")
    out: list[AlgebraicNumber] = []
    seen: set[IntPoly] = set()
    slack = 1e-12
    total_work = 0
    for d in range(1, d_max + 1):
        bound = math.comb(d, d // 2) * math.exp(d * h_max)
        box = math.floor(bound + 1e-9)
        total_work += (2 * box + 1) ** d * box
        if total_work > 20_000_000:
            raise BudgetExceeded("enumeration box too large")
        for lead in range(1, box + 1):
            for rest in product(range(-box, box + 1), repeat=d):
                coeffs = (lead,) + rest
                g = 0
                for x in coeffs:
                    g = gcd(g, x)
                if g != 1:
                    continue
                poly = coeffs
                if poly in seen:
                    continue
                if not is_irreducible(poly):
                    continue
                h = _mahler_height(poly, precision_bits)
                if h.value <= h_max + max(h.error_bound, slack):
                    seen.add(poly)
                    for idx in range(d):
                        out.append(AlgebraicNumber(poly, idx, precision_bits))
    out.sort(key=lambda a: (a.degree, a.minpoly, a.root_index))
    return out


# ---------------------------------------------------------------------------
# observational product report


@dataclass(frozen=True)
class ProductReport:
    heights: tuple[float, ...]
    product: float
    degrees: tuple[int, ...]
    degree_bound: int
    degenerate: bool

    def summary(self) -> str:
        lines = [
            "height product report (observational; no effective lower-bound "
            "constants are claimed)",
            f"heights: {', '.join(f'{h:.6f}' for h in self.heights)}",
            f"product: {self.product:.6f}",
            f"degrees: {', '.join(str(d) for d in self.degrees)} "
            f"(compositum degree <= {self.degree_bound})",
        ]
        if self.degenerate:
            lines.append(
                "degenerate input: some entry has height 0 (zero or root of "
                "unity); the product vanishes"
            )
        return "\n".join(lines)


def bmz_product_report(numbers: Sequence[AlgebraicNumber]) -> ProductReport:
    """Height product and degree data for a tuple of algebraic numbers.

    Emits the left-hand side of the multiplicative-independence lower
    bound together with the degree data; the constants of the bound are
    not effective in the cited form, so nothing is asserted about them.
    """
    heights = [weil_height(a) for a in numbers]
    values = tuple(h.value for h in heights)
    prod = math.prod(values) if values else 0.0
    degrees = tuple(a.degree for a in numbers)
    degree_bound = math.prod(degrees) if degrees else 1
    return ProductReport(
        heights=values,
        product=prod,
        degrees=degrees,
        degree_bound=degree_bound,
        degenerate=any(v == 0.0 for v in values),
    )

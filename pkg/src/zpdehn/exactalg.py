"""Exact rational linear algebra and generic-rank computation.

Cusp shapes enter every rank statement only through the monomials they
generate, and the classification lemmas all assume those monomials are
linearly independent over Q (non-quadratic shapes for a single cusp, the
rationally independent products for several).  We therefore model the
shapes as formal transcendentals tau_1..tau_n: under the independence
hypotheses, the rank of a matrix over Q(tau_1,...,tau_n) equals the true
rank at the actual shapes, and it becomes an exactly decidable quantity.
The monomials that actually occur are small: degree <= 2 in a single tau
for the 2x2 cusp blocks, and multidegree <= (1,...,1) for the Jacobians
at the complete structure, so the corresponding independence assumptions
are precisely "tau non-quadratic" and "rationally independent shapes".

All coefficient arithmetic is exact (int / fractions.Fraction); no
floating point enters this module.  Elimination is fraction-free in the
Bareiss style with a deterministic pivot choice (first nonzero entry in
row-major order), so intermediate results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Coeff = int | Fraction
Monomial = tuple[int, ...]


class QPoly:
    """Multivariate polynomial over Q in nvars formal variables.

    Terms map exponent vectors to nonzero coefficients; zero coefficients
    are never stored.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[Monomial, Coeff] | None = None):
        self.nvars = nvars
        self.terms: dict[Monomial, Coeff] = {}
        if terms:
            for mono, c in terms.items():
                if len(mono) != nvars:
                    raise ValueError(f"exponent vector {mono} has wrong length")
                if any(e < 0 for e in mono):
                    raise ValueError(f"negative exponent in {mono}")
                if c != 0:
                    self.terms[mono] = c

    @classmethod
    def constant(cls, nvars: int, c: Coeff) -> "QPoly":
        p = cls(nvars)
        if c != 0:
            p.terms[(0,) * nvars] = c
        return p

    @classmethod
    def zero(cls, nvars: int) -> "QPoly":
        return cls(nvars)

    @classmethod
    def one(cls, nvars: int) -> "QPoly":
        return cls.constant(nvars, 1)

    @classmethod
    def variable(cls, nvars: int, index: int) -> "QPoly":
        mono = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {mono: 1})

    @classmethod
    def linear(cls, nvars: int, const: Coeff, var_coeff: Coeff, index: int) -> "QPoly":
        """const + var_coeff * tau_index, the shape of every Jacobian entry."""
        p = cls(nvars)
        if const != 0:
            p.terms[(0,) * nvars] = const
        if var_coeff != 0:
            mono = tuple(1 if i == index else 0 for i in range(nvars))
            p.terms[mono] = var_coeff
        return p

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QPoly):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if len(self.terms) != len(other.terms):
            return False
        for mono, c in self.terms.items():
            if other.terms.get(mono, 0) != c:
                return False
        return True

    def __hash__(self):
        return hash((self.nvars, frozenset((m, Fraction(c)) for m, c in self.terms.items())))

    def __neg__(self) -> "QPoly":
        out = QPoly(self.nvars)
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __add__(self, other: "QPoly") -> "QPoly":
        self._check(other)
        out = QPoly(self.nvars)
        t = dict(self.terms)
        for mono, c in other.terms.items():
            s = t.get(mono, 0) + c
            if s == 0:
                t.pop(mono, None)
            else:
                t[mono] = s
        out.terms = t
        return out

    def __sub__(self, other: "QPoly") -> "QPoly":
        self._check(other)
        out = QPoly(self.nvars)
        t = dict(self.terms)
        for mono, c in other.terms.items():
            s = t.get(mono, 0) - c
            if s == 0:
                t.pop(mono, None)
            else:
                t[mono] = s
        out.terms = t
        return out

    def __mul__(self, other: "QPoly") -> "QPoly":
        self._check(other)
        out = QPoly(self.nvars)
        if not self.terms or not other.terms:
            return out
        t: dict[Monomial, Coeff] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                s = t.get(mono, 0) + c1 * c2
                if s == 0:
                    t.pop(mono, None)
                else:
                    t[mono] = s
        out.terms = t
        return out

    def scale(self, c: Coeff) -> "QPoly":
        out = QPoly(self.nvars)
        if c != 0:
            out.terms = {m: v * c for m, v in self.terms.items()}
        return out

    def _check(self, other: "QPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def _leading(self) -> tuple[Monomial, Coeff]:
        """Leading term in graded lexicographic order."""
        mono = max(self.terms, key=lambda m: (sum(m), m))
        return mono, self.terms[mono]

    def divide_exact(self, divisor: "QPoly") -> "QPoly":
        """Exact quotient self / divisor; raises if the division is not exact.

        Since LT(fg) = LT(f) LT(g) in any monomial order over a domain, the
        quotient of an exact division is recovered term by term from leading
        terms.  Bareiss elimination only ever divides exactly.
        """
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = QPoly(self.nvars, dict(self.terms))
        quo = QPoly(self.nvars)
        dm, dc = divisor._leading()
        while rem.terms:
            rm, rc = rem._leading()
            qm = tuple(a - b for a, b in zip(rm, dm))
            if any(e < 0 for e in qm):
                raise ArithmeticError("inexact polynomial division")
            qc = Fraction(rc) / Fraction(dc)
            if qc.denominator == 1:
                qc = int(qc)
            quo.terms[qm] = qc
            rem = rem - divisor * QPoly(self.nvars, {qm: qc})
        return quo

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=lambda m: (sum(m), m)):
            c = self.terms[mono]
            vars_part = "*".join(
                f"t{i + 1}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(mono)
                if e > 0
            )
            if vars_part:
                parts.append(f"{c}*{vars_part}" if c != 1 else vars_part)
            else:
                parts.append(str(c))
        return " + ".join(parts)


@dataclass(frozen=True)
class QPolyMatrix:
    """Rectangular matrix of polynomials sharing one variable count."""

    rows: int
    cols: int
    entries: tuple[tuple[QPoly, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[QPoly]]) -> "QPolyMatrix":
        if not rows:
            return cls(0, 0, ())
        ncols = len(rows[0])
        nvars = rows[0][0].nvars if ncols else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
            for p in r:
                if p.nvars != nvars:
                    raise ValueError("variable count mismatch in matrix")
        return cls(len(rows), ncols, tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class IntMatrix:
    """Rectangular integer matrix."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        if not rows:
            return cls(0, 0, ())
        ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        return cls(len(rows), ncols, tuple(tuple(int(x) for x in r) for r in rows))

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)


def generic_rank(m: QPolyMatrix) -> int:
    """Rank of m over the rational function field Q(tau_1,...,tau_n).

    Fraction-free Bareiss elimination with exact polynomial arithmetic;
    pivots are the first nonzero entries in row-major order.  The result
    is invariant under row/column permutations and transposition.
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    work = [list(r) for r in m.entries]
    nrows, ncols = m.rows, m.cols
    nvars = work[0][0].nvars
    prev = QPoly.one(nvars)
    rank = 0
    pr = 0
    for col in range(ncols):
        piv_row = None
        for i in range(pr, nrows):
            if not work[i][col].is_zero():
                piv_row = i
                break
        if piv_row is None:
            continue
        if piv_row != pr:
            work[pr], work[piv_row] = work[piv_row], work[pr]
        pivot = work[pr][col]
        for i in range(pr + 1, nrows):
            row_i = work[i]
            lead = row_i[col]
            if lead.is_zero():
                for j in range(col + 1, ncols):
                    if not row_i[j].is_zero():
                        row_i[j] = (pivot * row_i[j]).divide_exact(prev)
            else:
                prow = work[pr]
                for j in range(col + 1, ncols):
                    row_i[j] = (pivot * row_i[j] - lead * prow[j]).divide_exact(prev)
                row_i[col] = QPoly.zero(nvars)
        prev = pivot
        rank += 1
        pr += 1
        if pr == nrows:
            break
    return rank


def rank_q(rows: Sequence[Sequence[Coeff]]) -> int:
    """Exact rank over Q of a matrix of rationals, by Gaussian elimination."""
    work = [[Fraction(x) for x in r] for r in rows]
    if not work or not work[0]:
        return 0
    nrows, ncols = len(work), len(work[0])
    rank = 0
    pr = 0
    for col in range(ncols):
        piv_row = None
        for i in range(pr, nrows):
            if work[i][col] != 0:
                piv_row = i
                break
        if piv_row is None:
            continue
        if piv_row != pr:
            work[pr], work[piv_row] = work[piv_row], work[pr]
        pivot = work[pr][col]
        for i in range(pr + 1, nrows):
            f = work[i][col]
            if f == 0:
                continue
            ratio = f / pivot
            for j in range(col, ncols):
                work[i][j] -= ratio * work[pr][j]
        rank += 1
        pr += 1
        if pr == nrows:
            break
    return rank


def _column_hnf_transform(m: IntMatrix) -> tuple[list[list[int]], list[list[int]]]:
    """Column-reduce m by unimodular column operations.

    Returns (reduced, transform) with reduced = m * transform and transform
    unimodular; the nonzero columns of `reduced` come first.
    """
    nrows, ncols = m.rows, m.cols
    work = [list(r) for r in m.entries]
    trans = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def col_swap(a: int, b: int) -> None:
        for r in work:
            r[a], r[b] = r[b], r[a]
        for r in trans:
            r[a], r[b] = r[b], r[a]

    def col_addmul(dst: int, src: int, k: int) -> None:
        for r in work:
            r[dst] += k * r[src]
        for r in trans:
            r[dst] += k * r[src]

    def col_neg(a: int) -> None:
        for r in work:
            r[a] = -r[a]
        for r in trans:
            r[a] = -r[a]

    pc = 0
    for row in range(nrows):
        if pc == ncols:
            break
        # gcd-reduce the row segment [pc:] into a single pivot column
        while True:
            nz = [j for j in range(pc, ncols) if work[row][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(work[row][j]))
            if jmin != pc:
                col_swap(pc, jmin)
            if work[row][pc] < 0:
                col_neg(pc)
            done = True
            for j in range(pc + 1, ncols):
                if work[row][j] != 0:
                    q = work[row][j] // work[row][pc]
                    col_addmul(j, pc, -q)
                    if work[row][j] != 0:
                        done = False
            if done:
                break
        if work[row][pc] != 0:
            pc += 1
    return work, trans


def kernel_basis(m: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the integer kernel lattice {x in Z^c : m x = 0}.

    Computed by unimodular column reduction (Hermite-style); the returned
    vectors form a primitive basis of the kernel lattice, with count
    c - rank(m).
    """
    if m.cols == 0:
        return []
    if m.rows == 0:
        return [tuple(1 if i == j else 0 for i in range(m.cols)) for j in range(m.cols)]
    reduced, trans = _column_hnf_transform(m)
    basis = []
    for j in range(m.cols):
        if all(reduced[i][j] == 0 for i in range(m.rows)):
            basis.append(tuple(trans[i][j] for i in range(m.cols)))
    return basis


def det_q(rows: Sequence[Sequence[Coeff]]) -> Fraction:
    """Exact determinant over Q of a square matrix."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    work = [[Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for col in range(n):
        piv = None
        for i in range(col, n):
            if work[i][col] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            det = -det
        pivot = work[col][col]
        det *= pivot
        for i in range(col + 1, n):
            f = work[i][col]
            if f == 0:
                continue
            ratio = f / pivot
            for j in range(col, n):
                work[i][j] -= ratio * work[col][j]
    return det


def solve_q(
    rows: Sequence[Sequence[Coeff]], rhs: Sequence[Coeff]
) -> list[Fraction] | None:
    """One exact solution of rows * x = rhs over Q, or None if inconsistent.

    Free variables, if any, are set to zero.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    work = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    pivots: list[tuple[int, int]] = []
    pr = 0
    for col in range(ncols):
        piv = None
        for i in range(pr, nrows):
            if work[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        work[pr], work[piv] = work[piv], work[pr]
        pivot = work[pr][col]
        for i in range(nrows):
            if i == pr or work[i][col] == 0:
                continue
            ratio = work[i][col] / pivot
            for j in range(col, ncols + 1):
                work[i][j] -= ratio * work[pr][j]
        pivots.append((pr, col))
        pr += 1
        if pr == nrows:
            break
    for i in range(pr, nrows):
        if work[i][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for r, c in pivots:
        x[c] = work[r][ncols] / work[r][c]
    return x


def iter_int_vectors(length: int, bound: int) -> Iterable[tuple[int, ...]]:
    """All integer vectors of the given length with entries in [-bound, bound]."""
    from itertools import product

    return product(range(-bound, bound + 1), repeat=length)

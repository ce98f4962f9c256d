"""Small integer kernel bases and multiplicative relation detection.

The kernel construction realizes the small-solutions statement: given r
independent integer forms in n variables, it returns n - r independent
integer vectors annihilating all forms, reduced so the product of their
norms stays close to the product of the form norms.  The reduction is
LLL with delta = 0.99 and exact rational Gram-Schmidt arithmetic, so no
floating-point failure modes enter the certificate: annihilation is
checked in integer arithmetic before returning.

Relation detection is heuristic-with-verification: an LLL pass over the
scaled logarithm lattice proposes candidate exponent vectors, and only
candidates that survive a direct high-precision product check are
returned.  A "no relation" answer is evidence, not proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

import mpmath as mp

from .errors import BudgetExceeded, DegenerateForms, PrecisionTooLow
from .exactalg import IntMatrix, kernel_basis, rank_q


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)) -> list[list[int]]:
    """LLL reduction with exact rational Gram-Schmidt coefficients."""
    b = [[int(x) for x in row] for row in basis]
    n = len(b)
    if n == 0:
        return []
    if n > 24:
        raise BudgetExceeded("exact LLL limited to 24 vectors")

    def gram_schmidt():
        star: list[list[Fraction]] = []
        mu: list[list[Fraction]] = [[Fraction(0)] * n for _ in range(n)]
        norms: list[Fraction] = []
        for i in range(n):
            vec = [Fraction(x) for x in b[i]]
            for j in range(i):
                if norms[j] == 0:
                    mu[i][j] = Fraction(0)
                    continue
                mu[i][j] = _dot([Fraction(x) for x in b[i]], star[j]) / norms[j]
                vec = [v - mu[i][j] * s for v, s in zip(vec, star[j])]
            star.append(vec)
            norms.append(_dot(vec, vec))
        return star, mu, norms

    star, mu, norms = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            if abs(mu[k][j]) > Fraction(1, 2):
                r = round(mu[k][j])
                b[k] = [x - r * y for x, y in zip(b[k], b[j])]
                star, mu, norms = gram_schmidt()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            star, mu, norms = gram_schmidt()
            k = max(k - 1, 1)
    return b


def _norm(vec: Sequence[int]) -> float:
    return math.sqrt(sum(x * x for x in vec))


@dataclass(frozen=True)
class LatticeBasis:
    vectors: tuple[tuple[int, ...], ...]
    norms: tuple[float, ...]

    def __post_init__(self):
        if any(
            self.norms[i] > self.norms[i + 1] + 1e-12
            for i in range(len(self.norms) - 1)
        ):
            raise ValueError("basis must be sorted by norm")


def siegel_basis(forms: IntMatrix) -> tuple[LatticeBasis, float]:
    """Short integer basis of the common kernel of the given forms.

    Returns n - r independent vectors annihilating every row of `forms`
    (verified exactly), norm-sorted after LLL reduction, together with
    the ratio (product of basis norms) / (product of form norms) used to
    calibrate the universal constant empirically.
    """
    r, n = forms.rows, forms.cols
    if rank_q(forms.entries) != r:
        raise DegenerateForms("forms must be linearly independent")
    if r >= n:
        raise DegenerateForms("need strictly fewer forms than variables")
    kernel = kernel_basis(forms)
    if len(kernel) != n - r:
        raise DegenerateForms(
            f"kernel rank {len(kernel)} does not match n - r = {n - r}"
        )
    reduced = lll_reduce(kernel)
    for vec in reduced:
        for row in forms.entries:
            if sum(x * y for x, y in zip(row, vec)) != 0:
                raise AssertionError("reduced vector stopped annihilating the forms")
    reduced.sort(key=_norm)
    vectors = tuple(tuple(v) for v in reduced)
    norms = tuple(_norm(v) for v in vectors)
    basis_prod = math.prod(norms)
    forms_prod = math.prod(_norm(row) for row in forms.entries)
    return LatticeBasis(vectors, norms), basis_prod / forms_prod


# ---------------------------------------------------------------------------
# multiplicative relations


@dataclass(frozen=True)
class MultRelation:
    exponents: tuple[int, ...]
    residual: float

    def __post_init__(self):
        if not any(self.exponents):
            raise ValueError("relation exponents must not all vanish")
        g = 0
        for e in self.exponents:
            g = gcd(g, e)
        if g != 1:
            raise ValueError("relation exponents must be primitive (gcd 1)")


def _normalize_exponents(exps: Sequence[int]) -> tuple[int, ...] | None:
    g = 0
    for e in exps:
        g = gcd(g, e)
    if g == 0:
        return None
    out = [e // g for e in exps]
    for e in out:
        if e != 0:
            if e < 0:
                out = [-x for x in out]
            break
    return tuple(out)


def find_multiplicative_relation(
    numbers: Sequence[complex],
    coeff_bound: int,
    precision_bits: int = 256,
) -> MultRelation | None:
    """Search for integers a_i with prod eta_i^(a_i) = 1, |a_i| <= coeff_bound.

    An LLL pass over the integer lattice spanned by rows
    (e_i | C log|eta_i| | C arg eta_i) and the branch row (0 | 0 | C 2 pi)
    proposes candidates; each is re-verified by a direct product at the
    working precision against tolerance 2^(-precision_bits / 2).  The
    verified relation of smallest max-norm is returned, or None.
    """
    if precision_bits < 128:
        raise PrecisionTooLow("relation detection needs precision >= 128 bits")
    if len(numbers) > 8:
        raise BudgetExceeded("relation detection limited to 8 numbers")
    if not numbers:
        return None
    with mp.workprec(precision_bits + 32):
        values = [mp.mpc(z) for z in numbers]
        if any(v == 0 for v in values):
            raise ValueError("relation detection requires nonzero numbers")
        logs = [mp.log(abs(v)) for v in values]
        args = [mp.arg(v) for v in values]
        scale = mp.mpf(2) ** (precision_bits // 2 + 16)
        rows = []
        r = len(values)
        for i in range(r):
            row = [0] * r + [int(mp.nint(scale * logs[i])), int(mp.nint(scale * args[i]))]
            row[i] = 1
            rows.append(row)
        rows.append([0] * r + [0, int(mp.nint(scale * 2 * mp.pi))])
        reduced = lll_reduce(rows)
        tolerance = mp.mpf(2) ** (-(precision_bits // 2))
        best: tuple[int, tuple[int, ...], float] | None = None
        for vec in reduced:
            exps = _normalize_exponents(vec[:r])
            if exps is None:
                continue
            if max(abs(e) for e in exps) > coeff_bound:
                continue
            prod = mp.mpc(1)
            for v, e in zip(values, exps):
                prod *= v**e
            residual = abs(prod - 1)
            if residual < tolerance:
                key = max(abs(e) for e in exps)
                if best is None or key < best[0]:
                    best = (key, exps, float(residual))
        if best is None:
            return None
        return MultRelation(exponents=best[1], residual=best[2])


def exhaustive_relation_search(
    numbers: Sequence[complex],
    coeff_bound: int,
    precision_bits: int = 256,
) -> tuple[int, ...] | None:
    """Oracle: scan every exponent vector up to the bound directly.

    Exponentially expensive; intended for verifying the LLL-based search
    on small inputs.
    """
    from itertools import product as iproduct

    r = len(numbers)
    if (2 * coeff_bound + 1) ** r > 5_000_000:
        raise BudgetExceeded("exhaustive exponent scan too large")
    with mp.workprec(precision_bits + 32):
        values = [mp.mpc(z) for z in numbers]
        tolerance = mp.mpf(2) ** (-(precision_bits // 2))
        for exps in iproduct(range(-coeff_bound, coeff_bound + 1), repeat=r):
            if not any(exps):
                continue
            prod = mp.mpc(1)
            for v, e in zip(values, exps):
                prod *= v**e
            if abs(prod - 1) < tolerance:
                return _normalize_exponents(exps)
    return None

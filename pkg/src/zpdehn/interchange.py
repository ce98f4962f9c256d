"""Deficient-subset extraction from paired vector families.

A paired family holds n pairs (v_i, w_i) of vectors in Q^n (zero vectors
allowed).  A transversal picks one vector from each pair.  When every
transversal is linearly dependent, some proper subset S of the indices
spans at most |S| dimensions with BOTH of its vectors per index, and the
extraction below builds such a subset constructively:

  1. choose a maximum independent partial transversal U (indices I,
     one chosen vector per index),
  2. choose a maximum counter-set U' (indices J subset of I whose
     counter vectors extend U independently),
  3. if |I| = |J|, all pairs outside I are zero and S is their index set;
  4. otherwise cascade: starting from the chosen vectors on I \\ J as a
     basis B of their span, repeatedly collect the basis vectors that
     carry a nonzero expansion coefficient of some outside vector
     (first the pairs beyond I, then the counter vectors of the
     previously collected layer); when a layer comes out empty, the
     indices collected so far form S.

The search for U and U' is exhaustive (the existence statement gives no
search procedure); ties are broken deterministically: lexicographically
smallest index sets, chosen vector v preferred over w.  That is one
admissible choice among many, not a canonical one.  Every returned
subset is re-verified by an exact rank computation before returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .errors import BudgetExceeded, HypothesisViolated, NotABasis, NotInSpan
from .exactalg import Coeff, rank_q, solve_q

Vector = tuple[Fraction, ...]


def _to_vector(v: Sequence[Coeff]) -> Vector:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class PairedVectorFamily:
    """n pairs of vectors in Q^n; index i holds (v_i, w_i)."""

    n: int
    pairs: tuple[tuple[Vector, Vector], ...]

    @classmethod
    def build(cls, pairs: Sequence[tuple[Sequence[Coeff], Sequence[Coeff]]]) -> "PairedVectorFamily":
        n = len(pairs)
        conv = []
        for v, w in pairs:
            if len(v) != n or len(w) != n:
                raise ValueError("family vectors must have length equal to the pair count")
            conv.append((_to_vector(v), _to_vector(w)))
        return cls(n, tuple(conv))

    def vector(self, index: int, which: int) -> Vector:
        """which = 0 for v_index, 1 for w_index."""
        return self.pairs[index][which]


def _rank(vectors: Sequence[Vector]) -> int:
    if not vectors:
        return 0
    return rank_q(vectors)


def all_transversals_dependent(fam: PairedVectorFamily) -> bool:
    """True iff every choice (u_1..u_n), u_i in {v_i, w_i}, has rank < n."""
    if fam.n > 20:
        raise BudgetExceeded("transversal enumeration limited to n <= 20")
    # identical pairs halve the enumeration
    choices = []
    for v, w in fam.pairs:
        choices.append((0,) if v == w else (0, 1))
    for pick in product(*choices):
        sel = [fam.pairs[i][c] for i, c in enumerate(pick)]
        if _rank(sel) == fam.n:
            return False
    return True


def expansion_coefficients(basis: Sequence[Vector], target: Vector) -> list[Fraction]:
    """Coefficients of target on the given basis; errors mirror the lemma."""
    if _rank(basis) != len(basis):
        raise NotABasis("basis vectors are linearly dependent")
    cols = [[b[r] for b in basis] for r in range(len(target))]
    sol = solve_q(cols, list(target))
    if sol is None:
        raise NotInSpan("candidate lies outside the span of the basis")
    return sol


def is_interchangeable(basis: Sequence[Sequence[Coeff]], index: int, candidate: Sequence[Coeff]) -> bool:
    """True iff candidate can replace basis[index] without changing the span.

    Equivalently, the expansion coefficient of candidate on basis[index]
    is nonzero.
    """
    b = [_to_vector(v) for v in basis]
    coeffs = expansion_coefficients(b, _to_vector(candidate))
    return coeffs[index] != 0


def _max_transversal(fam: PairedVectorFamily) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Deterministic maximum independent partial transversal.

    Returns (indices, picks) with picks[i] in {0, 1} selecting v or w.
    The maximum cardinality is the largest transversal rank; among index
    sets of that size the lexicographically smallest independent one wins,
    and within it v-choices are preferred over w.
    """
    n = fam.n
    best = 0
    choices = []
    for v, w in fam.pairs:
        choices.append((0,) if v == w else (0, 1))
    for pick in product(*choices):
        sel = [fam.pairs[i][c] for i, c in enumerate(pick)]
        best = max(best, _rank(sel))
        if best == n:
            break
    if best == 0:
        return (), ()
    for idx in combinations(range(n), best):
        for pick in product(*(choices[i] for i in idx)):
            sel = [fam.pairs[i][c] for i, c in zip(idx, pick)]
            if _rank(sel) == best:
                return idx, pick
    raise AssertionError("maximum transversal disappeared during re-enumeration")


def _max_counter_set(
    fam: PairedVectorFamily, idx: tuple[int, ...], picks: tuple[int, ...]
) -> tuple[int, ...]:
    """Largest J subset of idx whose counter vectors extend U independently."""
    chosen = [fam.pairs[i][c] for i, c in zip(idx, picks)]
    counter = {i: fam.pairs[i][1 - c] for i, c in zip(idx, picks)}
    for size in range(len(idx), -1, -1):
        for j_set in combinations(idx, size):
            sel = chosen + [counter[j] for j in j_set]
            if _rank(sel) == len(sel):
                return j_set
    return ()


def find_deficient_subset(fam: PairedVectorFamily) -> frozenset[int]:
    """Proper subset S of {0..n-1} with dim span{v_i, w_i : i in S} <= |S|.

    Requires the all-transversals-dependent hypothesis and n >= 2 (the
    statement requires a proper subset, which cannot exist for n = 1).
    The construction follows the maximum-transversal / counter-set /
    cascading-layers proof; the result is rank-checked before returning.
    """
    n = fam.n
    if n < 2:
        raise BudgetExceeded("families of size n = 1 admit no proper subset; rejected")
    if n > 12:
        raise BudgetExceeded("deficient-subset extraction limited to n <= 12")
    idx, picks = _max_transversal(fam)
    h = len(idx)
    if h == n:
        raise HypothesisViolated("an independent transversal exists")
    if h == 0:
        # every vector in the family is zero; any singleton certifies
        return _verified(fam, frozenset({0}))
    j_set = _max_counter_set(fam, idx, picks)
    k = len(j_set)

    if h == k:
        # every pair outside the maximum transversal must be zero
        s = frozenset(range(n)) - frozenset(idx)
        return _verified(fam, s)

    # basis of the working span: chosen vectors on I \ J
    free_idx = [i for i in idx if i not in j_set]
    pick_of = dict(zip(idx, picks))
    basis = [fam.pairs[i][pick_of[i]] for i in free_idx]
    counter_of = {i: fam.pairs[i][1 - pick_of[i]] for i in free_idx}

    outside: list[Vector] = []
    for i in range(n):
        if i not in idx:
            outside.extend(fam.pairs[i])

    collected: list[int] = []  # positions into free_idx, in cascade order
    remaining = set(range(len(free_idx)))
    layer_targets = [v for v in outside if any(x != 0 for x in v)]
    if not layer_targets:
        # all outside pairs are zero vectors
        s = frozenset(range(n)) - frozenset(idx)
        return _verified(fam, s)
    while True:
        layer: set[int] = set()
        for target in layer_targets:
            coeffs = expansion_coefficients(basis, target)
            for pos, c in enumerate(coeffs):
                if c != 0 and pos in remaining:
                    layer.add(pos)
        if not layer:
            s = frozenset(free_idx[pos] for pos in collected)
            if not s:
                raise HypothesisViolated(
                    "cascade produced an empty subset; outside vectors vanish "
                    "yet were reported nonzero"
                )
            return _verified(fam, s)
        collected.extend(sorted(layer))
        remaining -= layer
        layer_targets = [
            counter_of[free_idx[pos]]
            for pos in sorted(layer)
            if any(x != 0 for x in counter_of[free_idx[pos]])
        ]
        if not layer_targets:
            s = frozenset(free_idx[pos] for pos in collected)
            return _verified(fam, s)


def _verified(fam: PairedVectorFamily, s: frozenset[int]) -> frozenset[int]:
    if not s or len(s) >= fam.n:
        raise HypothesisViolated(f"extracted subset {sorted(s)} is not proper and nonempty")
    if not subset_is_deficient(fam, s):
        raise HypothesisViolated(f"extracted subset {sorted(s)} fails the rank check")
    return s


def subset_is_deficient(fam: PairedVectorFamily, s: frozenset[int] | set[int]) -> bool:
    vecs = []
    for i in sorted(s):
        vecs.extend(fam.pairs[i])
    return _rank(vecs) <= len(s)


def brute_force_deficient_subset(fam: PairedVectorFamily) -> frozenset[int] | None:
    """Exhaustive oracle: smallest proper subset passing the rank check.

    Subsets are scanned by increasing size, lexicographically within a
    size; returns None when no proper nonempty subset qualifies.
    """
    if fam.n > 8:
        raise BudgetExceeded("brute-force subset search limited to n <= 8")
    for size in range(1, fam.n):
        for s in combinations(range(fam.n), size):
            if subset_is_deficient(fam, set(s)):
                return frozenset(s)
    return None

"""Decision procedures for the 2x4 cusp-block rank classification.

A cusp block is a rank-2 integer matrix with rows (a_i, b_i, c_i, d_i)
whose associated 2x2 shape matrix is either

    OneTau:  [[a1 + b1*t, c1 + d1*t], [a2 + b2*t, c2 + d2*t]]
    TwoTau:  [[a1 + b1*t1, c1 + d1*t2], [a2 + b2*t1, c2 + d2*t2]]

with t (resp. t1, t2) formal transcendentals.  Every minor of these
matrices has degree <= 2 in a single variable (OneTau) or multidegree
<= (1,1) (TwoTau), so working with transcendentals encodes exactly the
"non-quadratic" and "1, t1, t2, t1*t2 independent" hypotheses of the
classification statements.

The classification: a rank-2 block whose shape matrix is singular is
proportional ((c,d) rows = m*(a,b) rows for one nonzero rational m),
left-only (right 2x2 block zero), or right-only (left 2x2 block zero);
in TwoTau mode only the left-only/right-only cases occur.  The exhaustive
sweep verifies this equivalence over a full integer box.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd

from .errors import BudgetExceeded, ConstraintViolated, LemmaViolation, RankPreconditionViolated
from .exactalg import IntMatrix, QPoly, QPolyMatrix, generic_rank, rank_q


class BlockMode(enum.Enum):
    ONE_TAU = "one-tau"
    TWO_TAU = "two-tau"


@dataclass(frozen=True)
class CuspBlock:
    """2x4 integer block together with its shape-matrix template."""

    matrix: IntMatrix
    mode: BlockMode

    def __post_init__(self):
        if self.matrix.rows != 2 or self.matrix.cols != 4:
            raise ValueError("cusp block must be 2x4")

    @classmethod
    def from_rows(cls, row1, row2, mode: BlockMode) -> "CuspBlock":
        return cls(IntMatrix.from_rows([row1, row2]), mode)

    def int_rank(self) -> int:
        return rank_q(self.matrix.entries)


class FormTag(enum.Enum):
    PROPORTIONAL = "proportional"
    LEFT_ONLY = "left-only"
    RIGHT_ONLY = "right-only"
    NO_FORM = "no-form"


@dataclass(frozen=True)
class BlockForm:
    tag: FormTag
    m: Fraction | None = None

    def __post_init__(self):
        if self.tag is FormTag.PROPORTIONAL:
            if self.m is None or self.m == 0:
                raise ValueError("proportional form requires nonzero m")
        elif self.m is not None:
            raise ValueError("only the proportional form carries m")


class PairVerdict(enum.Enum):
    SAME_PAIR = "same-pair"
    NEGATED_PAIR = "negated-pair"
    IMPOSSIBLE = "impossible"


def shape_matrix(block: CuspBlock) -> QPolyMatrix:
    """The 2x2 matrix over Q(t) resp. Q(t1,t2) attached to the block."""
    (a1, b1, c1, d1), (a2, b2, c2, d2) = block.matrix.entries
    if block.mode is BlockMode.ONE_TAU:
        nv, left, right = 1, 0, 0
    else:
        nv, left, right = 2, 0, 1
    rows = [
        [QPoly.linear(nv, a1, b1, left), QPoly.linear(nv, c1, d1, right)],
        [QPoly.linear(nv, a2, b2, left), QPoly.linear(nv, c2, d2, right)],
    ]
    return QPolyMatrix.from_rows(rows)


def tau_block_rank(block: CuspBlock) -> int:
    """Generic rank of the block's shape matrix."""
    return generic_rank(shape_matrix(block))


def _syntactic_form(block: CuspBlock) -> BlockForm:
    (a1, b1, c1, d1), (a2, b2, c2, d2) = block.matrix.entries
    if c1 == d1 == c2 == d2 == 0:
        return BlockForm(FormTag.LEFT_ONLY)
    if a1 == b1 == a2 == b2 == 0:
        return BlockForm(FormTag.RIGHT_ONLY)
    if block.mode is BlockMode.ONE_TAU:
        # (c_i, d_i) = m (a_i, b_i) for a single nonzero rational m
        m = None
        for left, right in (((a1, b1), (c1, d1)), ((a2, b2), (c2, d2))):
            for x, y in zip(left, right):
                if x != 0:
                    m = Fraction(y, x)
                    break
            if m is not None:
                break
        if m is not None and m != 0:
            if (
                Fraction(c1) == m * a1
                and Fraction(d1) == m * b1
                and Fraction(c2) == m * a2
                and Fraction(d2) == m * b2
            ):
                return BlockForm(FormTag.PROPORTIONAL, m)
    return BlockForm(FormTag.NO_FORM)


def classify_block(block: CuspBlock) -> BlockForm:
    """Classify a rank-2 block into proportional / left-only / right-only.

    The classification is syntactic; the shape-matrix rank criterion
    (singular iff some form matches) is the content of the classification
    statements and is asserted by exhaustive_lemma_sweep.
    """
    if block.int_rank() != 2:
        raise RankPreconditionViolated("cusp block must have integer rank 2")
    return _syntactic_form(block)


def _coprime(p: int, q: int) -> bool:
    return gcd(p, q) == 1


def dehn_pair_verdict(
    block: CuspBlock, pq: tuple[int, int], pq2: tuple[int, int]
) -> PairVerdict:
    """Relation forced between two filling pairs by a singular shape matrix.

    In OneTau mode with a singular shape matrix the pairs must coincide up
    to a simultaneous sign; in TwoTau mode with all pair entries nonzero a
    singular shape matrix is impossible, so the verdict is IMPOSSIBLE.
    Non-coprime pairs are rejected (the statements only cover coprime ones).
    """
    p, q = pq
    p2, q2 = pq2
    if not _coprime(p, q) or not _coprime(p2, q2):
        raise ConstraintViolated("pairs must be coprime")
    if block.int_rank() != 2:
        raise RankPreconditionViolated("cusp block must have integer rank 2")
    for a, b, c, d in block.matrix.entries:
        if -q * a + p * b - q2 * c + p2 * d != 0:
            raise ConstraintViolated(
                f"-q*a + p*b - q'*c + p'*d != 0 on row ({a},{b},{c},{d})"
            )
    if block.mode is BlockMode.TWO_TAU:
        if p == 0 or q == 0 or p2 == 0 or q2 == 0:
            raise ConstraintViolated("TwoTau verdict requires all of p, q, p', q' nonzero")
        if tau_block_rank(block) != 2:
            raise LemmaViolation(
                f"TwoTau block {block.matrix.entries} has singular shape matrix "
                f"under nonzero pairs {pq}, {pq2}"
            )
        return PairVerdict.IMPOSSIBLE
    if tau_block_rank(block) != 1:
        raise RankPreconditionViolated("OneTau verdict requires a singular shape matrix")
    same = (p, q) == (p2, q2)
    negated = (p, q) == (-p2, -q2)
    if same and negated:
        raise LemmaViolation("coprime pairs cannot be simultaneously equal and negated")
    if same:
        return PairVerdict.SAME_PAIR
    if negated:
        return PairVerdict.NEGATED_PAIR
    raise LemmaViolation(
        f"singular OneTau block {block.matrix.entries} admits pairs {pq} != ±{pq2}"
    )


@dataclass(frozen=True)
class SweepReport:
    mode: BlockMode
    entry_bound: int
    total: int
    rank2: int
    form_counts: dict
    violations: int
    violation_samples: tuple

    def summary(self) -> str:
        lines = [
            f"mode={self.mode.value} bound={self.entry_bound}",
            f"candidates: {self.total}",
            f"rank-2 blocks: {self.rank2}",
        ]
        for tag in FormTag:
            lines.append(f"count({tag.value}): {self.form_counts.get(tag, 0)}")
        lines.append(f"violations: {self.violations}")
        return "\n".join(lines)


def _rank2_2x4(r1, r2) -> bool:
    """Rank test specialized to two integer rows of length 4."""
    for i in range(4):
        for j in range(i + 1, 4):
            if r1[i] * r2[j] - r1[j] * r2[i] != 0:
                return True
    return False


def exhaustive_lemma_sweep(entry_bound: int, mode: BlockMode) -> SweepReport:
    """Check the classification over every rank-2 block in an integer box.

    Asserts, for each block with entries in [-entry_bound, entry_bound] and
    integer rank 2, that the shape matrix is singular exactly when the
    syntactic classification finds a form, and that a found form matches
    the matrix.  Violations are counted (and must be zero).
    """
    if entry_bound > 3:
        raise BudgetExceeded("entry_bound > 3 exceeds the enumeration budget")
    form_counts: dict[FormTag, int] = {tag: 0 for tag in FormTag}
    total = 0
    rank2 = 0
    violations = 0
    samples = []
    rng = range(-entry_bound, entry_bound + 1)
    rows = list(product(rng, repeat=4))
    for r1 in rows:
        for r2 in rows:
            total += 1
            if not _rank2_2x4(r1, r2):
                continue
            rank2 += 1
            block = CuspBlock.from_rows(r1, r2, mode)
            form = _syntactic_form(block)
            trank = tau_block_rank(block)
            form_counts[form.tag] += 1
            ok = (trank == 1) == (form.tag is not FormTag.NO_FORM)
            if ok and form.tag is FormTag.PROPORTIONAL:
                m = form.m
                ok = all(
                    Fraction(c) == m * a and Fraction(d) == m * b
                    for (a, b, c, d) in block.matrix.entries
                )
            if not ok:
                violations += 1
                if len(samples) < 10:
                    samples.append((r1, r2, form.tag.value, trank))
    return SweepReport(
        mode=mode,
        entry_bound=entry_bound,
        total=total,
        rank2=rank2,
        form_counts=form_counts,
        violations=violations,
        violation_samples=tuple(samples),
    )

"""Algebraic-subgroup specs, Jacobians at the complete structure, and the
containment cascade.

A subgroup spec stores integer exponent rows over the cusp holonomy
coordinates (M_1, L_1, ..., M_n, L_n), doubled for a product of two
copies of the variety (primed coordinates come after the unprimed block
and carry the same cusp shapes: the two factors are the same manifold).
Taking logarithms at the complete structure turns each defining equation
into a linear form in (u_j, v_j) with v_j = tau_j u_j + higher, so the
Jacobian at u = 0 has entry a + b*tau_j in the column of u_j.

The verdict is a rank statement: the intersection component through the
complete structure is isolated (not anomalous) exactly when the generic
Jacobian rank equals the number of defining equations.  When it does
not, the cascade walks the rank-deficiency proof: extract a deficient
column-pair subset, Gauss-eliminate those columns to block-triangular
form, refine until the upper block has full generic rank, and recurse on
the lower-right block over the remaining cusps until a full-rank square
subsystem certifies u_j = 0 on its cusps.  A numeric continuation check
backs the symbolic verdict by tracing actual solution points of the
log-linear system against a truncated potential.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cusplemmas import (
    BlockMode,
    CuspBlock,
    FormTag,
    PairVerdict,
    classify_block,
    dehn_pair_verdict,
    tau_block_rank,
)
from .errors import (
    CascadeExhausted,
    ConstraintViolated,
    LemmaViolation,
    NewtonDiverged,
    NotAnomalous,
    RankPreconditionViolated,
)
from .exactalg import IntMatrix, QPoly, QPolyMatrix, generic_rank, rank_q
from .interchange import PairedVectorFamily, find_deficient_subset
from .nzdehn import NZPotential, _v_of_u_unchecked, v_jacobian


@dataclass(frozen=True)
class SubgroupSpec:
    """Integer exponent rows defining an algebraic subgroup.

    Column order: (a_1, b_1, ..., a_n, b_n) for copies = 1, extended by
    the primed block (a'_1, b'_1, ..., a'_n, b'_n) for copies = 2.
    Rows must be linearly independent over Q (codimension = row count).
    """

    n_cusps: int
    copies: int
    rows: IntMatrix

    def __post_init__(self):
        if self.copies not in (1, 2):
            raise ValueError("copies must be 1 or 2")
        expected = 2 * self.n_cusps * self.copies
        if self.rows.cols != expected:
            raise ValueError(f"expected {expected} columns, got {self.rows.cols}")
        if self.rows.rows == 0:
            raise ValueError("at least one defining row required")
        if rank_q(self.rows.entries) != self.rows.rows:
            raise ValueError("defining rows must be linearly independent over Q")

    @classmethod
    def build(cls, n_cusps: int, rows: Sequence[Sequence[int]], copies: int = 1) -> "SubgroupSpec":
        return cls(n_cusps, copies, IntMatrix.from_rows(rows))

    @property
    def codimension(self) -> int:
        return self.rows.rows


class Verdict(enum.Enum):
    ISOLATED = "isolated"


ISOLATED = Verdict.ISOLATED


@dataclass(frozen=True)
class AnomalyVerdict:
    jacobian_rank: int
    row_count: int

    @property
    def isolated(self) -> bool:
        return self.jacobian_rank == self.row_count

    @property
    def deficiency(self) -> int:
        return self.row_count - self.jacobian_rank

    def __str__(self):
        if self.isolated:
            return "isolated"
        return f"anomalous(rank={self.jacobian_rank}, deficiency={self.deficiency})"


def jacobian_at_complete(
    spec: SubgroupSpec, sigma: Sequence[int] | None = None
) -> QPolyMatrix:
    """Jacobian of the log-linear system at u = 0 over formal shapes.

    One column per cusp variable u_j (then u'_j for copies = 2); the
    entry in row r and the column of u_j is a_rj + b_rj * tau_j, primed
    columns reusing the same tau_j.  For copies = 2 an optional sigma
    relabels the primed cusp blocks (sigma[j] = cusp whose primed
    coordinates the j-th primed column pair refers to); identity by
    default.
    """
    n = spec.n_cusps
    if sigma is None:
        sigma = list(range(n))
    else:
        sigma = list(sigma)
        if sorted(sigma) != list(range(n)):
            raise ValueError("sigma must be a permutation of range(n_cusps)")
    rows = []
    for row in spec.rows.entries:
        out = []
        for j in range(n):
            out.append(QPoly.linear(n, row[2 * j], row[2 * j + 1], j))
        if spec.copies == 2:
            base = 2 * n
            for j in range(n):
                tau_index = sigma[j]
                out.append(
                    QPoly.linear(n, row[base + 2 * j], row[base + 2 * j + 1], tau_index)
                )
        rows.append(out)
    return QPolyMatrix.from_rows(rows)


def anomaly_verdict(spec: SubgroupSpec, sigma: Sequence[int] | None = None) -> AnomalyVerdict:
    """Isolated iff the generic Jacobian rank equals the row count."""
    rank = generic_rank(jacobian_at_complete(spec, sigma))
    return AnomalyVerdict(jacobian_rank=rank, row_count=spec.rows.rows)


# ---------------------------------------------------------------------------
# containment cascade


def _jacobian_rows(rows: list[list[Fraction]], cusps: list[int], n_vars: int) -> QPolyMatrix:
    """Jacobian of rational rows over the listed cusps (variables shared)."""
    out = []
    for row in rows:
        entries = []
        for j, cusp in enumerate(cusps):
            a, b = row[2 * j], row[2 * j + 1]
            p = QPoly(n_vars)
            if a:
                p.terms[(0,) * n_vars] = a
            if b:
                mono = tuple(1 if i == cusp else 0 for i in range(n_vars))
                p.terms[mono] = b
            entries.append(p)
        out.append(entries)
    return QPolyMatrix.from_rows(out)


def _column_pair(rows: list[list[Fraction]], j: int) -> tuple[tuple, tuple]:
    a = tuple(r[2 * j] for r in rows)
    b = tuple(r[2 * j + 1] for r in rows)
    return a, b


def _echelon_eliminate(
    rows: list[list[Fraction]], cols: list[int], active: list[int]
) -> None:
    """Row-reduce in place so the given columns vanish below their rank.

    Only the rows listed in `active` participate; the elimination uses
    exact rational arithmetic.
    """
    pr = 0
    for c in cols:
        piv = None
        for i in range(pr, len(active)):
            if rows[active[i]][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        active[pr], active[piv] = active[piv], active[pr]
        prow = rows[active[pr]]
        pivot = prow[c]
        for i in range(pr + 1, len(active)):
            row = rows[active[i]]
            f = row[c]
            if f == 0:
                continue
            ratio = f / pivot
            for k in range(len(row)):
                row[k] -= ratio * prow[k]
        pr += 1


def containment_cascade(spec: SubgroupSpec) -> int | Verdict:
    """Certify a cusp index with the component in M_i = L_i = 1, or ISOLATED.

    Returns a 1-based cusp index when the component through the complete
    structure is anomalous (generic Jacobian rank below the row count);
    returns ISOLATED otherwise.  Raises CascadeExhausted if the recursion
    reaches a state the containment theorem excludes.
    """
    if spec.copies != 1:
        raise ValueError("the cascade operates on single-copy specs")
    n = spec.n_cusps
    rows = [[Fraction(x) for x in row] for row in spec.rows.entries]
    if len(rows) > 2 * n:
        rows = rows[: 2 * n]
    cusps = list(range(n))
    top_verdict = anomaly_verdict(spec)
    if top_verdict.isolated:
        return ISOLATED
    result = _cascade(rows, cusps, n, depth=0)
    if result is None:
        raise CascadeExhausted("recursion ended without certifying a cusp")
    return result + 1


def _cascade(rows: list[list[Fraction]], cusps: list[int], n_vars: int, depth: int) -> int | None:
    if depth > 2 * n_vars + 4:
        raise CascadeExhausted("recursion depth exceeded")
    # prune cusps whose column pair is entirely zero (the subgroup does not
    # constrain them) and truncate row surplus to the cusp count; iterate,
    # since truncation may zero out further column pairs
    while True:
        keep = []
        for j in range(len(cusps)):
            a, b = _column_pair(rows, j)
            if any(a) or any(b):
                keep.append(j)
        if len(keep) < len(cusps):
            rows = [
                [row[2 * j + k] for j in keep for k in (0, 1)]
                for row in rows
            ]
            cusps = [cusps[j] for j in keep]
        rows = [r for r in rows if any(x != 0 for x in r)]
        if not cusps or not rows:
            raise CascadeExhausted("no constrained cusps remain")
        if len(rows) <= len(cusps):
            break
        # keep the first nc equations; the dropped ones only grow the
        # subgroup, so a certificate for the kept system transfers
        rows = rows[: len(cusps)]
    nc = len(cusps)
    l = len(rows)
    jac = _jacobian_rows(rows, cusps, n_vars)
    rank = generic_rank(jac)
    if rank == l:
        if l == nc:
            # full-rank square system forces u_j = 0 on every listed cusp
            return min(cusps)
        raise CascadeExhausted(
            "non-square subsystem of full rank: the parent system was not anomalous"
        )

    # anomalous subsystem, l <= nc: extract a deficient pair subset among
    # the first l column pairs, eliminate, refine, recurse
    family = PairedVectorFamily.build(
        [_column_pair(rows, j) for j in range(l)]
    )
    s_positions = sorted(find_deficient_subset(family))

    active = list(range(l))
    while True:
        m = len(s_positions)
        cols = [2 * j + k for j in s_positions for k in (0, 1)]
        _echelon_eliminate(rows, cols, active)
        if m == l:
            raise CascadeExhausted("deficient subset was not proper")
        # upper block: first m active rows on the subset columns
        upper = [[rows[active[i]][c] for c in cols] for i in range(m)]
        upper_jac = _jacobian_rows(upper, [cusps[j] for j in s_positions], n_vars)
        if generic_rank(upper_jac) == len(upper):
            break
        # refine: deficient subset of the upper block's pairs
        sub_family = PairedVectorFamily.build(
            [
                (
                    tuple(upper[r][2 * jj] for r in range(m)),
                    tuple(upper[r][2 * jj + 1] for r in range(m)),
                )
                for jj in range(m)
            ]
        )
        refined = sorted(find_deficient_subset(sub_family))
        s_positions = [s_positions[j] for j in refined]

    m = len(s_positions)
    remaining_positions = [j for j in range(len(cusps)) if j not in s_positions]
    sub_rows = [
        [rows[active[i]][2 * j + k] for j in remaining_positions for k in (0, 1)]
        for i in range(m, l)
    ]
    sub_cusps = [cusps[j] for j in remaining_positions]
    return _cascade(sub_rows, sub_cusps, n_vars, depth + 1)


def sample_anomalous_specs(
    seed: int, count: int, max_cusps: int = 3, entry_bound: int = 2
) -> list[SubgroupSpec]:
    """Seeded stream of single-copy specs with anomalous verdicts.

    Construction: confine a block of rows to a proper cusp subset T with
    more rows than |T| (the Jacobian rank over those columns cannot
    exceed |T|), optionally extended by rows supported on the remaining
    cusps; the total rank stays below the row count, so every emitted
    spec is anomalous.  Entries are bounded, rows independent over Q.
    """
    rng = random.Random(seed)
    out: list[SubgroupSpec] = []
    while len(out) < count:
        n = rng.randint(2, max_cusps)
        t = rng.randint(1, n - 1)
        cusp_subset = sorted(rng.sample(range(n), t))
        l_core = rng.randint(t + 1, 2 * t)

        def rand_row(support):
            row = [0] * (2 * n)
            for j in support:
                row[2 * j] = rng.randint(-entry_bound, entry_bound)
                row[2 * j + 1] = rng.randint(-entry_bound, entry_bound)
            return row

        rows = []
        attempts = 0
        while len(rows) < l_core and attempts < 200:
            attempts += 1
            cand = rand_row(cusp_subset)
            if any(cand) and rank_q(rows + [cand]) == len(rows) + 1:
                rows.append(cand)
        if len(rows) < l_core:
            continue
        if rng.random() < 0.5 and t < n - 0:
            others = [j for j in range(n) if j not in cusp_subset]
            if others:
                extra = rng.randint(1, min(2, 2 * n - len(rows)))
                added = 0
                attempts = 0
                while added < extra and attempts < 100:
                    attempts += 1
                    cand = rand_row(others)
                    if any(cand) and rank_q(rows + [cand]) == len(rows) + 1:
                        rows.append(cand)
                        added += 1
        rng.shuffle(rows)
        spec = SubgroupSpec.build(n, rows)
        verdict = anomaly_verdict(spec)
        if verdict.isolated:
            continue
        out.append(spec)
    return out


# ---------------------------------------------------------------------------
# numeric continuation


def continuation_check(
    spec: SubgroupSpec,
    pot: NZPotential,
    verdict: int | Verdict,
    samples: int = 10,
    *,
    tol: float = 1e-9,
    seed: int = 0,
) -> bool:
    """Numerically confirm a cascade verdict against a truncated potential.

    Traces solution points of the log-linear system A (u, v(u)) = 0 along
    kernel directions of the numeric Jacobian at 0 and checks that the
    certified cusp keeps |u_i|, |v_i| < tol on every sampled point.  An
    isolated verdict has no directions to trace and is vacuously true.
    """
    if spec.copies != 1:
        raise ValueError("continuation runs on single-copy specs")
    if pot.trunc_degree < 4:
        raise ValueError("potential truncation degree must be >= 4")
    if pot.n_cusps != spec.n_cusps:
        raise ValueError("potential cusp count does not match spec")
    if verdict is ISOLATED:
        return True
    cusp = int(verdict) - 1
    if not 0 <= cusp < spec.n_cusps:
        raise ValueError(f"cusp index {verdict} out of range")

    n = spec.n_cusps
    rows = [list(row) for row in spec.rows.entries]
    a_mat = np.array([[row[2 * j] for j in range(n)] for row in rows], dtype=complex)
    b_mat = np.array([[row[2 * j + 1] for j in range(n)] for row in rows], dtype=complex)
    tau = np.array(pot.shapes, dtype=complex)
    j0 = a_mat + b_mat * tau[None, :]

    # kernel of the numeric Jacobian at u = 0
    u_svd, sing, vh = np.linalg.svd(j0)
    rank = int(np.sum(sing > 1e-10 * max(1.0, float(sing[0])) if sing.size else 0))
    kernel = vh[rank:].conj()
    if kernel.shape[0] == 0:
        return True  # numerically isolated: nothing to trace

    rng = random.Random(seed)
    eps = min(0.2, pot.trust_radius / 3) if pot.coefficients else 0.2

    def residual(u_vec):
        v = np.array(_v_of_u_unchecked(pot, list(u_vec)), dtype=complex)
        return a_mat @ u_vec + b_mat @ v

    def jac(u_vec):
        dv = np.array(v_jacobian(pot, list(u_vec)), dtype=complex)
        return a_mat + b_mat @ dv

    for _ in range(samples):
        coeffs = np.array(
            [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(kernel.shape[0])]
        )
        direction = coeffs @ kernel
        norm = np.linalg.norm(direction)
        if norm == 0:
            continue
        u_vec = direction / norm * eps
        converged = False
        for _ in range(60):
            f = residual(u_vec)
            if np.max(np.abs(f)) < 1e-13:
                converged = True
                break
            step, *_ = np.linalg.lstsq(jac(u_vec), f, rcond=None)
            u_vec = u_vec - step
        if not converged:
            raise NewtonDiverged("continuation failed to land on the solution set")
        v_vec = np.array(_v_of_u_unchecked(pot, list(u_vec)), dtype=complex)
        if abs(u_vec[cusp]) >= tol or abs(v_vec[cusp]) >= tol:
            return False
    return True


# ---------------------------------------------------------------------------
# product (two-copy) classification


class ProductKind(enum.Enum):
    ONE_DIMENSIONAL = "one-dimensional"
    TWO_DIMENSIONAL = "two-dimensional"
    ISOLATED = "isolated"


@dataclass(frozen=True)
class ProductClassification:
    kind: ProductKind
    # cusp index (1-based) -> SAME_PAIR / NEGATED_PAIR for blocks of rank 1
    relations: dict
    # cusps forced to M = M' = L = L' = 1 (rank-2 straight blocks)
    collapsed: tuple[int, ...]

    def containment(self) -> str:
        if self.kind is ProductKind.ISOLATED:
            return "isolated point"
        parts = []
        for cusp, rel in sorted(self.relations.items()):
            inv = "'" if rel is PairVerdict.SAME_PAIR else "'^-1"
            parts.append(f"M{cusp}=M{cusp}{inv}, L{cusp}=L{cusp}{inv}")
        for cusp in self.collapsed:
            parts.append(f"M{cusp}=M'{cusp}=L{cusp}=L'{cusp}=1")
        return "; ".join(parts)


def _extract_block(rows, n, j, k):
    """Rows restricted to (M_j, L_j, M'_k, L'_k) columns."""
    base = 2 * n
    return [
        (row[2 * j], row[2 * j + 1], row[base + 2 * k], row[base + 2 * k + 1])
        for row in rows
    ]


def product_anomaly_classify(
    spec: SubgroupSpec,
    pairs: Sequence[tuple[int, int]],
    primed_pairs: Sequence[tuple[int, int]],
) -> ProductClassification:
    """Classify a two-copy spec on 2 cusps with per-cusp grouped rows.

    Rows must split into groups of two, each group supported on a single
    unprimed cusp block and a single primed cusp block.  Straight wiring
    (cusp j with cusp j') is classified through the one-shape block
    statements: a singular block forces the pair relation (p_j, q_j) =
    +/-(p'_j, q'_j) and the matching coordinate identification, a
    nonsingular block collapses its cusp; two nonsingular blocks leave an
    isolated point, reported as NotAnomalous.  Cross wiring (cusp j with
    cusp k', j != k) always gives an isolated point when all pair entries
    are nonzero.
    """
    if spec.copies != 2 or spec.n_cusps != 2:
        raise ValueError("product classification expects copies=2, n_cusps=2")
    n = spec.n_cusps
    rows = [list(r) for r in spec.rows.entries]
    if len(rows) != 4:
        raise ConstraintViolated("expected four defining rows (two per cusp block)")
    if len(pairs) != n or len(primed_pairs) != n:
        raise ConstraintViolated("one (p, q) and one (p', q') per cusp required")

    # discover the wiring of each row: which unprimed / primed cusp it
    # uses (either side may be absent, e.g. M_2^p L_2^q = 1)
    def support(row):
        un = {j for j in range(n) if row[2 * j] or row[2 * j + 1]}
        pr = {
            k for k in range(n) if row[2 * n + 2 * k] or row[2 * n + 2 * k + 1]
        }
        if len(un) > 1 or len(pr) > 1:
            raise ConstraintViolated(
                "each row may involve at most one unprimed and one primed cusp"
            )
        return (
            next(iter(un)) if un else None,
            next(iter(pr)) if pr else None,
        )

    supports = [support(row) for row in rows]

    def try_partition(wirings):
        groups = {w: [] for w in wirings}
        for row, (uj, pk) in zip(rows, supports):
            matches = [
                w for w in wirings
                if (uj is None or w[0] == uj) and (pk is None or w[1] == pk)
            ]
            if len(matches) != 1:
                return None
            groups[matches[0]].append(row)
        if any(len(g) != 2 for g in groups.values()):
            return None
        return groups

    groups = try_partition([(0, 0), (1, 1)])
    straight = groups is not None
    if groups is None:
        groups = try_partition([(0, 1), (1, 0)])
    if groups is None:
        raise ConstraintViolated(
            "rows do not split into two straight or two cross wired groups of two"
        )
    cross = not straight

    blocks = {}
    for (j, k), grp in groups.items():
        block_rows = _extract_block(grp, n, j, k)
        p, q = pairs[j]
        p2, q2 = primed_pairs[k]
        for a, b, c, d in block_rows:
            if -q * a + p * b - q2 * c + p2 * d != 0:
                raise ConstraintViolated(
                    f"row ({a},{b},{c},{d}) violates the pair constraint on cusps {j + 1},{k + 1}'"
                )
        mode = BlockMode.ONE_TAU if j == k else BlockMode.TWO_TAU
        blocks[(j, k)] = CuspBlock.from_rows(block_rows[0], block_rows[1], mode)

    if cross:
        for (j, k), block in blocks.items():
            p, q = pairs[j]
            p2, q2 = primed_pairs[k]
            verdict = dehn_pair_verdict(block, (p, q), (p2, q2))
            if verdict is not PairVerdict.IMPOSSIBLE:
                raise LemmaViolation("cross-wired block unexpectedly classified")
        return ProductClassification(ProductKind.ISOLATED, {}, ())

    relations = {}
    collapsed = []
    for (j, _k), block in sorted(blocks.items()):
        if block.int_rank() != 2:
            raise RankPreconditionViolated(f"cusp {j + 1} block must have integer rank 2")
        if tau_block_rank(block) == 1:
            form = classify_block(block)
            if form.tag is not FormTag.PROPORTIONAL:
                # left-only / right-only cannot satisfy coprime constraints
                # with a rank-2 block (the statements exclude them)
                raise LemmaViolation(
                    f"singular straight block on cusp {j + 1} is not proportional"
                )
            relations[j + 1] = dehn_pair_verdict(block, pairs[j], primed_pairs[j])
        else:
            collapsed.append(j + 1)
    if len(relations) == 2:
        kind = ProductKind.TWO_DIMENSIONAL
    elif len(relations) == 1:
        kind = ProductKind.ONE_DIMENSIONAL
    else:
        raise NotAnomalous("both cusp blocks are nonsingular: the point is isolated")
    return ProductClassification(kind, relations, tuple(collapsed))

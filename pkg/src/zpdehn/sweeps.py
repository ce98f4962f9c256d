"""Seeded randomized sweeps shared by the CLI and the acceptance suite.

Each sweep returns a small report object whose `violations` count must
be zero; a nonzero count means a verified classification statement
produced a counterexample, which the CLI maps to exit code 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd

from .anomalous import ISOLATED, containment_cascade, continuation_check, sample_anomalous_specs
from .cusplemmas import (
    BlockMode,
    CuspBlock,
    PairVerdict,
    dehn_pair_verdict,
    tau_block_rank,
)
from .errors import LemmaViolation
from .exactalg import IntMatrix, kernel_basis, rank_q
from .interchange import (
    PairedVectorFamily,
    all_transversals_dependent,
    brute_force_deficient_subset,
    find_deficient_subset,
    subset_is_deficient,
)
from .nzdehn import synth_potential


@dataclass
class SweepOutcome:
    name: str
    samples: int
    violations: int
    details: dict = field(default_factory=dict)

    def summary(self) -> str:
        lines = [f"sweep: {self.name}", f"samples: {self.samples}"]
        for key in sorted(self.details):
            lines.append(f"{key}: {self.details[key]}")
        lines.append(f"violations: {self.violations}")
        return "\n".join(lines)


def _random_coprime_pair(rng: random.Random, max_sum: int, nonzero: bool) -> tuple[int, int]:
    while True:
        p = rng.randint(-max_sum, max_sum)
        q = rng.randint(-max_sum, max_sum)
        if abs(p) + abs(q) == 0 or abs(p) + abs(q) > max_sum:
            continue
        if nonzero and (p == 0 or q == 0):
            continue
        if gcd(p, q) == 1:
            return p, q


def dehn_pair_sweep(
    seed: int,
    samples: int,
    mode: BlockMode,
    max_pair_sum: int = 8,
) -> SweepOutcome:
    """Check the pair-relation statements on seeded constrained blocks.

    Samples rank-2 blocks satisfying the linear pair constraints: random
    combinations from the constraint kernel (generically nonsingular
    shape matrices) plus, in OneTau mode, the proportional constructions
    that realize singular ones.  Any singular OneTau block must force
    (p, q) = +-(p', q'); a TwoTau block with wholly nonzero pairs must
    never be singular.
    """
    rng = random.Random(seed)
    nonzero = mode is BlockMode.TWO_TAU
    violations = 0
    rank1 = 0
    verdict_counts: dict[str, int] = {}
    produced = 0
    while produced < samples:
        pq = _random_coprime_pair(rng, max_pair_sum, nonzero)
        if mode is BlockMode.ONE_TAU and rng.random() < 0.5:
            # singular construction: (c, d) = m (a, b) with m = +-1, the only
            # proportionality constants compatible with coprime pairs
            m = rng.choice((1, -1))
            pq2 = (-pq[0], -pq[1]) if m == 1 else pq
            rows = []
            for _ in range(30):
                rows = [
                    [rng.randint(-2, 2) for _ in range(2)] for _ in range(2)
                ]
                if rank_q(rows) == 2:
                    break
            block_rows = [
                (a, b, m * a, m * b) for a, b in rows
            ]
        else:
            pq2 = _random_coprime_pair(rng, max_pair_sum, nonzero)
            p, q = pq
            p2, q2 = pq2
            kernel = kernel_basis(IntMatrix.from_rows([[-q, p, -q2, p2]]))
            block_rows = None
            for _ in range(50):
                cand = []
                for _ in range(2):
                    vec = [0, 0, 0, 0]
                    for k in kernel:
                        c = rng.randint(-2, 2)
                        vec = [x + c * y for x, y in zip(vec, k)]
                    cand.append(tuple(vec))
                if rank_q(cand) == 2:
                    block_rows = cand
                    break
            if block_rows is None:
                continue
        if rank_q(block_rows) != 2:
            continue
        block = CuspBlock.from_rows(block_rows[0], block_rows[1], mode)
        produced += 1
        try:
            if mode is BlockMode.ONE_TAU:
                if tau_block_rank(block) != 1:
                    verdict_counts["nonsingular"] = verdict_counts.get("nonsingular", 0) + 1
                    continue
                rank1 += 1
                verdict = dehn_pair_verdict(block, pq, pq2)
                expected = (
                    PairVerdict.SAME_PAIR if pq == pq2 else PairVerdict.NEGATED_PAIR
                )
                if verdict is not expected:
                    violations += 1
                verdict_counts[verdict.value] = verdict_counts.get(verdict.value, 0) + 1
            else:
                verdict = dehn_pair_verdict(block, pq, pq2)
                if verdict is not PairVerdict.IMPOSSIBLE:
                    violations += 1
                verdict_counts[verdict.value] = verdict_counts.get(verdict.value, 0) + 1
        except LemmaViolation:
            violations += 1
    details = dict(verdict_counts)
    if mode is BlockMode.ONE_TAU:
        details["singular-blocks"] = rank1
    return SweepOutcome(
        name=f"dehn-pair[{mode.value}]",
        samples=produced,
        violations=violations,
        details=details,
    )


def random_dependent_family(rng: random.Random, n: int, entry_bound: int = 2) -> PairedVectorFamily:
    """Family confined to a random proper subspace; hypothesis holds by construction."""
    d = rng.randint(1, n - 1)
    while True:
        basis = [[rng.randint(-entry_bound, entry_bound) for _ in range(n)] for _ in range(d)]
        if rank_q(basis) == d:
            break

    def vec():
        coeffs = [rng.randint(-entry_bound, entry_bound) for _ in range(d)]
        return tuple(
            sum(c * basis[i][j] for i, c in enumerate(coeffs)) for j in range(n)
        )

    return PairedVectorFamily.build([(vec(), vec()) for _ in range(n)])


def deficient_subset_sweep(seed: int, families: int, max_n: int = 6) -> SweepOutcome:
    """Extraction vs brute force on seeded hypothesis-satisfying families."""
    rng = random.Random(seed)
    violations = 0
    sizes: dict[int, int] = {}
    for _ in range(families):
        n = rng.randint(2, max_n)
        fam = random_dependent_family(rng, n)
        if not all_transversals_dependent(fam):
            violations += 1
            continue
        s = find_deficient_subset(fam)
        if not subset_is_deficient(fam, s):
            violations += 1
            continue
        oracle = brute_force_deficient_subset(fam)
        if oracle is None or not subset_is_deficient(fam, oracle):
            violations += 1
            continue
        sizes[len(s)] = sizes.get(len(s), 0) + 1
    return SweepOutcome(
        name="deficient-subset",
        samples=families,
        violations=violations,
        details={f"subset-size-{k}": v for k, v in sorted(sizes.items())},
    )


def cascade_sweep(
    seed: int,
    count: int,
    *,
    continuation_samples: int = 3,
    tol: float = 1e-9,
) -> SweepOutcome:
    """Cascade every sampled anomalous spec and confirm by continuation."""
    specs = sample_anomalous_specs(seed, count)
    pots = {
        n: synth_potential(seed + n, n, trust_radius=0.6)
        for n in sorted({s.n_cusps for s in specs})
    }
    violations = 0
    exhausted = 0
    indices: dict[int, int] = {}
    for i, spec in enumerate(specs):
        try:
            verdict = containment_cascade(spec)
        except Exception:
            exhausted += 1
            violations += 1
            continue
        if verdict is ISOLATED:
            violations += 1
            continue
        indices[verdict] = indices.get(verdict, 0) + 1
        if not continuation_check(
            spec, pots[spec.n_cusps], verdict, samples=continuation_samples, tol=tol, seed=i
        ):
            violations += 1
    details = {f"cusp-{k}": v for k, v in sorted(indices.items())}
    details["cascade-exhausted"] = exhausted
    return SweepOutcome(
        name="containment-cascade",
        samples=count,
        violations=violations,
        details=details,
    )

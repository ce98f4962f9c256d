"""Truncated even potentials, Dehn-filling solvers, and cosmetic scans.

A potential here is the truncated Taylor series

    Phi(u) = tau_1 u_1^2 + ... + tau_n u_n^2 + sum_alpha m_alpha u^alpha,

with every multi-index alpha componentwise even and 4 <= |alpha| <=
trunc_degree.  The filling flow derives everything from Phi:

    v_i(u)   = (1/2) dPhi/du_i = tau_i u_i + higher order,
    filling  : p_i u_i + q_i v_i(u) = branch * 2 pi i   (branch = +1),
    holonomy : t_i = exp(r_i u_i + s_i v_i),  -q_i r_i + p_i s_i = 1,

with t_i normalized to |t_i| > 1 by flipping (r_i, s_i) to (-r_i, -s_i)
when needed.  The 2 pi i branch is the one whose solutions tend to the
complete structure u = 0 as |p| + |q| grows; callers wanting the
conjugate branch pass branch = -1.

Newton iteration starts from u_i = branch * 2 pi i / (p_i + q_i tau_i)
(exact for a purely quadratic potential).  A high-precision path (mpmath)
backs relation detection on holonomies and the confirmation re-solve of
any reported cosmetic collision.
"""

from __future__ import annotations

import cmath
import json
import math
import re as _re
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import mpmath as mp
import numpy as np

from .errors import (
    BudgetExceeded,
    ManifoldFileError,
    NewtonDiverged,
    OutOfTrustRadius,
)

MultiIndex = tuple[int, ...]

TWO_PI_I = 2j * math.pi


# ---------------------------------------------------------------------------
# potential


@dataclass(frozen=True)
class NZPotential:
    n_cusps: int
    shapes: tuple[complex, ...]
    coefficients: dict[MultiIndex, complex]
    trunc_degree: int
    trust_radius: float = 0.5

    def __post_init__(self):
        if self.n_cusps < 1:
            raise ValueError("potential needs at least one cusp")
        if len(self.shapes) != self.n_cusps:
            raise ValueError("one shape per cusp required")
        for tau in self.shapes:
            if tau.imag == 0:
                raise ValueError(f"cusp shape {tau} is real")
        if self.trunc_degree < 4 or self.trunc_degree % 2 != 0:
            raise ValueError("truncation degree must be an even integer >= 4")
        for alpha, value in self.coefficients.items():
            if len(alpha) != self.n_cusps:
                raise ValueError(f"multi-index {alpha} has wrong length")
            if any(a < 0 or a % 2 != 0 for a in alpha):
                raise ValueError(f"multi-index {alpha} has odd or negative entries")
            total = sum(alpha)
            if total == 0:
                raise ValueError("constant term not allowed")
            if total == 2:
                raise ValueError("quadratic coefficients belong in shapes")
            if total > self.trunc_degree:
                raise ValueError(f"multi-index {alpha} exceeds truncation degree")
        object.__setattr__(
            self,
            "coefficients",
            {a: complex(v) for a, v in self.coefficients.items() if v != 0},
        )

    def coefficient(self, alpha: MultiIndex) -> complex:
        return self.coefficients.get(tuple(alpha), 0.0 + 0.0j)


def _check_trust(pot: NZPotential, u: Sequence[complex]) -> None:
    # a purely quadratic potential is exact everywhere; the radius guards
    # only the truncated higher-order series
    if not pot.coefficients:
        return
    for i, ui in enumerate(u):
        if abs(ui) > pot.trust_radius + 1e-15:
            raise OutOfTrustRadius(
                f"|u_{i + 1}| = {abs(ui):.6g} exceeds trust radius {pot.trust_radius}"
            )


def phi_value(pot: NZPotential, u: Sequence[complex]) -> complex:
    """Scalar potential value at u (used for finite-difference checks)."""
    _check_trust(pot, u)
    total = sum(tau * ui * ui for tau, ui in zip(pot.shapes, u))
    for alpha, m in pot.coefficients.items():
        term = m
        for ui, a in zip(u, alpha):
            term *= ui**a
        total += term
    return total


def v_of_u(pot: NZPotential, u: Sequence[complex]) -> list[complex]:
    """Gradient flow v_i = tau_i u_i + (1/2) sum_alpha alpha_i m_alpha u^(alpha - e_i)."""
    _check_trust(pot, u)
    return _v_of_u_unchecked(pot, list(u))


def _v_of_u_unchecked(pot: NZPotential, u: list) -> list:
    n = pot.n_cusps
    v = [tau * ui for tau, ui in zip(pot.shapes, u)]
    for alpha, m in pot.coefficients.items():
        for i in range(n):
            if alpha[i] == 0:
                continue
            term = 0.5 * alpha[i] * m
            for j, a in enumerate(alpha):
                e = a - (1 if j == i else 0)
                if e:
                    term *= u[j] ** e
            v[i] += term
    return v


def v_jacobian(pot: NZPotential, u: list) -> list[list]:
    """Matrix dv_i/du_j at u."""
    n = pot.n_cusps
    jac = [[0.0 * u[0] for _ in range(n)] for _ in range(n)]
    for i in range(n):
        jac[i][i] = jac[i][i] + pot.shapes[i]
    for alpha, m in pot.coefficients.items():
        for i in range(n):
            if alpha[i] == 0:
                continue
            for j in range(n):
                mult = alpha[i] * (alpha[j] - (1 if i == j else 0))
                if mult == 0:
                    continue
                term = 0.5 * mult * m
                for k, a in enumerate(alpha):
                    e = a - (1 if k == i else 0) - (1 if k == j else 0)
                    if e:
                        term *= u[k] ** e
                jac[i][j] = jac[i][j] + term
    return jac


def tail_bound(pot: NZPotential, radius: float, coeff_radius: float) -> float:
    """Geometric bound on the dropped v-series tail at |u_i| <= radius.

    Assumes the untruncated series keeps drawing coefficients of modulus
    <= coeff_radius; bounds sum over degrees above the truncation of
    (k/2) * #indices(k) * coeff_radius * radius^(k-1) by closed form.
    """
    if radius >= 1:
        return math.inf
    n = pot.n_cusps
    total = 0.0
    k = pot.trunc_degree + 2
    # sum a convergent majorant; terms decay geometrically in radius^2
    while True:
        n_indices = math.comb(k // 2 + n - 1, n - 1)
        term = (k / 2) * n_indices * coeff_radius * radius ** (k - 1)
        total += term
        if term < 1e-30 * max(total, 1e-300):
            break
        k += 2
    return total


# ---------------------------------------------------------------------------
# filling coefficients


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _xgcd(b, a % b)
    return (g, y, x - (a // b) * y)


def default_rs(p: int, q: int) -> tuple[int, int]:
    """A pair (r, s) with -q r + p s = 1, from the extended gcd of (p, q)."""
    g, x, y = _xgcd(p, q)
    if g != 1:
        raise ValueError(f"({p}, {q}) is not coprime")
    # x p + y q = 1  ->  s = x, r = -y
    return (-y, x)


@dataclass(frozen=True)
class FillingCoefficient:
    """Per-cusp coprime pairs (p_i, q_i) plus chosen (r_i, s_i)."""

    pairs: tuple[tuple[int, int], ...]
    rs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.pairs) != len(self.rs):
            raise ValueError("one (r, s) per (p, q) required")
        for (p, q), (r, s) in zip(self.pairs, self.rs):
            if gcd(p, q) != 1:
                raise ValueError(f"({p}, {q}) is not coprime")
            if -q * r + p * s != 1:
                raise ValueError(f"normalization -q r + p s = 1 fails for ({p},{q},{r},{s})")

    @classmethod
    def build(
        cls,
        pairs: Sequence[tuple[int, int]],
        rs: Sequence[tuple[int, int]] | None = None,
    ) -> "FillingCoefficient":
        pairs = tuple((int(p), int(q)) for p, q in pairs)
        if rs is None:
            rs = tuple(default_rs(p, q) for p, q in pairs)
        else:
            rs = tuple((int(r), int(s)) for r, s in rs)
        return cls(pairs, rs)

    @property
    def n_cusps(self) -> int:
        return len(self.pairs)

    def slope_str(self) -> str:
        return ",".join(f"{p}/{q}" for p, q in self.pairs)


@dataclass(frozen=True)
class FillingResult:
    coeff: FillingCoefficient
    u: tuple[complex, ...]
    v: tuple[complex, ...]
    holonomies: tuple[complex, ...]
    rs_used: tuple[tuple[int, int], ...]
    residual: float
    newton_iters: int


# ---------------------------------------------------------------------------
# solver


def _initial_guess(pot: NZPotential, coeff: FillingCoefficient, branch: int):
    guess = []
    for (p, q), tau in zip(coeff.pairs, pot.shapes):
        denom = p + q * tau
        if denom == 0:
            raise NewtonDiverged(f"degenerate slope {p}/{q}: p + q tau = 0")
        guess.append(branch * TWO_PI_I / denom)
    return guess


def solve_filling(
    pot: NZPotential,
    coeff: FillingCoefficient,
    *,
    branch: int = 1,
    tol: float = 1e-12,
    max_iter: int = 80,
    precision_bits: int | None = None,
) -> FillingResult:
    """Newton-solve the filling equations and extract normalized holonomies.

    branch selects the sign of the 2 pi i right-hand side.  When
    precision_bits is given the whole iteration runs in mpmath arithmetic
    at that precision (holonomies inherit it); otherwise complex128.
    """
    if coeff.n_cusps != pot.n_cusps:
        raise ValueError("coefficient cusp count does not match potential")
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    guess = _initial_guess(pot, coeff, branch)
    _check_trust(pot, guess)
    if precision_bits is None:
        u, res, iters = _newton_complex(pot, coeff, guess, branch, tol, max_iter)
    else:
        u, res, iters = _newton_mp(pot, coeff, guess, branch, tol, max_iter, precision_bits)
    v = _v_of_u_unchecked(pot, u)
    holos = []
    rs_used = []
    for i, ((p, q), (r, s)) in enumerate(zip(coeff.pairs, coeff.rs)):
        log_t = r * u[i] + s * v[i]
        if precision_bits is None:
            t = cmath.exp(log_t)
        else:
            t = mp.e**log_t
        if abs(t) < 1:
            t = 1 / t
            rs_used.append((-r, -s))
        else:
            rs_used.append((r, s))
        holos.append(t)
    return FillingResult(
        coeff=coeff,
        u=tuple(u),
        v=tuple(v),
        holonomies=tuple(holos),
        rs_used=tuple(rs_used),
        residual=float(res),
        newton_iters=iters,
    )


def _newton_complex(pot, coeff, guess, branch, tol, max_iter):
    n = pot.n_cusps
    p = np.array([pq[0] for pq in coeff.pairs], dtype=complex)
    q = np.array([pq[1] for pq in coeff.pairs], dtype=complex)
    rhs = branch * TWO_PI_I
    u = np.array(guess, dtype=complex)
    for it in range(1, max_iter + 1):
        v = np.array(_v_of_u_unchecked(pot, list(u)), dtype=complex)
        f = p * u + q * v - rhs
        res = float(np.max(np.abs(f)))
        if res < tol:
            return list(u), res, it
        jac = np.diag(p) + np.diag(q) @ np.array(v_jacobian(pot, list(u)), dtype=complex)
        try:
            step = np.linalg.solve(jac, f)
        except np.linalg.LinAlgError as exc:
            raise NewtonDiverged(f"singular Newton system at iteration {it}") from exc
        u = u - step
        if np.max(np.abs(u)) > 4 * pot.trust_radius:
            raise NewtonDiverged(
                f"iterate escaped to |u| = {float(np.max(np.abs(u))):.3g}"
            )
    raise NewtonDiverged(f"no convergence within {max_iter} iterations (residual {res:.3g})")


def _newton_mp(pot, coeff, guess, branch, tol, max_iter, precision_bits):
    n = pot.n_cusps
    with mp.workprec(precision_bits):
        shapes = [mp.mpc(t.real, t.imag) for t in pot.shapes]
        coeffs = {a: mp.mpc(m.real, m.imag) for a, m in pot.coefficients.items()}
        pot_mp = object.__new__(NZPotential)
        object.__setattr__(pot_mp, "n_cusps", pot.n_cusps)
        object.__setattr__(pot_mp, "shapes", tuple(shapes))
        object.__setattr__(pot_mp, "coefficients", coeffs)
        object.__setattr__(pot_mp, "trunc_degree", pot.trunc_degree)
        object.__setattr__(pot_mp, "trust_radius", pot.trust_radius)
        rhs = 2j * mp.pi * branch
        u = [mp.mpc(g.real, g.imag) for g in guess]
        # refresh the guess in working precision
        for i, (pq, tau) in enumerate(zip(coeff.pairs, shapes)):
            u[i] = rhs / (pq[0] + pq[1] * tau)
        # converge down to the working precision, not just the float target
        target = min(mp.mpf(tol), mp.mpf(2) ** (-precision_bits + 10))
        for it in range(1, max_iter + 1):
            v = _v_of_u_unchecked(pot_mp, u)
            f = [
                pq[0] * ui + pq[1] * vi - rhs
                for pq, ui, vi in zip(coeff.pairs, u, v)
            ]
            res = max(abs(x) for x in f)
            if res < target:
                return u, float(res), it
            jac_v = v_jacobian(pot_mp, u)
            jac = mp.matrix(n, n)
            for i in range(n):
                for j in range(n):
                    jac[i, j] = jac_v[i][j] * coeff.pairs[i][1]
                jac[i, i] += coeff.pairs[i][0]
            step = mp.lu_solve(jac, mp.matrix(f))
            u = [ui - step[i] for i, ui in enumerate(u)]
    raise NewtonDiverged(f"no convergence within {max_iter} mpmath iterations")


def closed_form_quadratic(
    pot: NZPotential, coeff: FillingCoefficient, *, branch: int = 1
) -> FillingResult:
    """Exact solution for a purely quadratic potential (no stored coefficients)."""
    if pot.coefficients:
        raise ValueError("closed form requires a purely quadratic potential")
    u = []
    v = []
    holos = []
    rs_used = []
    for (p, q), (r, s), tau in zip(coeff.pairs, coeff.rs, pot.shapes):
        ui = branch * TWO_PI_I / (p + q * tau)
        vi = tau * ui
        u.append(ui)
        v.append(vi)
        t = cmath.exp(r * ui + s * vi)
        if abs(t) < 1:
            t = 1 / t
            rs_used.append((-r, -s))
        else:
            rs_used.append((r, s))
        holos.append(t)
    return FillingResult(
        coeff=coeff,
        u=tuple(u),
        v=tuple(v),
        holonomies=tuple(holos),
        rs_used=tuple(rs_used),
        residual=0.0,
        newton_iters=0,
    )


# ---------------------------------------------------------------------------
# holonomy sets


def core_holonomy_set(result: FillingResult) -> tuple[complex, ...]:
    """The holonomies as a canonically ordered tuple (set semantics)."""
    return tuple(sorted((complex(t) for t in result.holonomies), key=lambda z: (z.real, z.imag)))


def holonomy_sets_match(
    a: Iterable[complex], b: Iterable[complex], tol: float = 1e-8
) -> bool:
    """Multiset equality of holonomies up to tol (greedy matching)."""
    left = list(a)
    right = list(b)
    if len(left) != len(right):
        return False
    used = [False] * len(right)
    for x in left:
        hit = None
        for j, y in enumerate(right):
            if not used[j] and abs(x - y) <= tol:
                hit = j
                break
        if hit is None:
            return False
        used[hit] = True
    return True


def holonomy_set_distance(a: Iterable[complex], b: Iterable[complex]) -> float:
    """Max-min matching distance between two equal-size holonomy tuples."""
    left = sorted(a, key=lambda z: (z.real, z.imag))
    right = sorted(b, key=lambda z: (z.real, z.imag))
    if len(left) != len(right):
        return math.inf
    return max(abs(x - y) for x, y in zip(left, right))


# ---------------------------------------------------------------------------
# predicates


def sgi_check(pot: NZPotential) -> bool:
    """True iff no stored coefficient mixes both cusp variables (2-cusp)."""
    if pot.n_cusps != 2:
        raise ValueError("SGI is defined for 2-cusped potentials")
    return all(
        not (alpha[0] > 0 and alpha[1] > 0) for alpha in pot.coefficients
    )


def difference_collapse_check(pot: NZPotential, tol: float = 1e-12) -> bool:
    """Check (i+2)(i+1) m_{i+2,k-i-2} = (k-i)(k-i-1) m_{i,k-i} throughout.

    The recurrence over all even k <= trunc_degree and even 0 <= i <= k-2
    holds exactly when the degree >= 4 part of the potential is a series
    in (u_1 - u_2).  Absent coefficients are zero; k = 2 only touches the
    quadratic part, which lives in the shapes, so it contributes nothing.
    """
    if pot.n_cusps != 2:
        raise ValueError("difference collapse is defined for 2-cusped potentials")
    for k in range(4, pot.trunc_degree + 1, 2):
        for i in range(0, k - 1, 2):
            lhs = (i + 2) * (i + 1) * pot.coefficient((i + 2, k - i - 2))
            rhs = (k - i) * (k - i - 1) * pot.coefficient((i, k - i))
            if abs(lhs - rhs) > tol:
                return False
    return True


# ---------------------------------------------------------------------------
# synthetic potentials

_ROOT_X3_MINUS_X_PLUS_1 = complex(0.6623589786223730, 0.5622795120623012)
_CBRT2 = 2 ** (1 / 3)


def default_shapes(n: int) -> tuple[complex, ...]:
    """Documented non-quadratic non-real shapes.

    Cusp 1: the root of x^3 - x + 1 with positive imaginary part.
    Cusp k >= 2: i * k^(1/3) (degree-6 minimal polynomial x^6 + k^2).
    """
    shapes = [_ROOT_X3_MINUS_X_PLUS_1]
    for k in range(2, n + 1):
        shapes.append(complex(0.0, k ** (1 / 3)))
    return tuple(shapes[:n])


def even_multi_indices(n: int, trunc_degree: int) -> list[MultiIndex]:
    """All componentwise-even multi-indices with 4 <= total <= trunc_degree."""
    out: list[MultiIndex] = []

    def rec(prefix: list[int], remaining: int, total: int):
        if remaining == 1:
            for a in range(0, total + 1, 2):
                out.append(tuple(prefix + [a]))
            return
        for a in range(0, total + 1, 2):
            rec(prefix + [a], remaining - 1, total - a)

    collected: list[MultiIndex] = []
    for total in range(4, trunc_degree + 1, 2):
        out = []
        rec([], n, total)
        collected.extend(m for m in out if sum(m) == total)
    return collected


def synth_potential(
    seed: int,
    n: int,
    trunc_degree: int = 8,
    shapes: Sequence[complex] | None = None,
    *,
    coeff_radius: float = 0.1,
    trust_radius: float = 0.5,
    mixing: bool = True,
) -> NZPotential:
    """Deterministic synthetic potential with coefficients in a small disk.

    Coefficients are drawn uniformly from the disk of radius coeff_radius,
    reproducibly in seed.  With mixing=True (default) at least one
    coefficient coupling two different cusps is kept away from zero; with
    mixing=False all such coefficients are dropped, giving an SGI
    potential for n = 2.
    """
    import random

    rng = random.Random(seed)
    if shapes is None:
        shapes = default_shapes(n)
    coeffs: dict[MultiIndex, complex] = {}
    indices = even_multi_indices(n, trunc_degree)
    for alpha in indices:
        while True:
            z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            if abs(z) <= 1:
                break
        coeffs[alpha] = z * coeff_radius
    mixing_indices = [a for a in indices if sum(1 for x in a if x > 0) >= 2]
    if not mixing:
        for a in mixing_indices:
            coeffs.pop(a, None)
    elif mixing_indices:
        a0 = mixing_indices[0]
        if abs(coeffs[a0]) < coeff_radius / 4:
            coeffs[a0] = coeff_radius * complex(0.5, 0.5)
    return NZPotential(
        n_cusps=n,
        shapes=tuple(complex(t) for t in shapes),
        coefficients=coeffs,
        trunc_degree=trunc_degree,
        trust_radius=trust_radius,
    )


# ---------------------------------------------------------------------------
# cosmetic scan


def coprime_slopes(low: int, high: int) -> list[tuple[int, int]]:
    """Canonical coprime pairs with |p| + |q| in [low, high].

    (p, q) and (-p, -q) give the same filling, so representatives take
    p > 0, plus (0, 1) when in range.
    """
    slopes = []
    if low <= 1 <= high:
        slopes.append((0, 1))
    for p in range(1, high + 1):
        for absq in range(0, high - p + 1):
            if p + absq < low:
                continue
            for q in ((absq,) if absq == 0 else (absq, -absq)):
                if gcd(p, q) == 1:
                    slopes.append((p, q))
    slopes.sort()
    return slopes


@dataclass(frozen=True)
class Collision:
    index_a: int
    index_b: int
    coeff_a: tuple[tuple[int, int], ...]
    coeff_b: tuple[tuple[int, int], ...]
    distance: float
    trivial: bool
    confirmed: bool


@dataclass(frozen=True)
class CollisionReport:
    bound: int
    tol: float
    fillings: tuple[FillingResult, ...]
    collisions: tuple[Collision, ...]
    failures: tuple[tuple[tuple[tuple[int, int], ...], str], ...] = field(default=())

    @property
    def nontrivial(self) -> tuple[Collision, ...]:
        return tuple(c for c in self.collisions if not c.trivial)


def _scan_worker(args):
    pot, pairs_chunk, tol = args
    out = []
    for pairs in pairs_chunk:
        coeff = FillingCoefficient.build(pairs)
        try:
            out.append((pairs, solve_filling(pot, coeff, tol=tol), None))
        except (NewtonDiverged, OutOfTrustRadius) as exc:
            out.append((pairs, None, f"{type(exc).__name__}: {exc}"))
    return out


def cosmetic_scan(
    pot: NZPotential,
    bound: int,
    tol: float = 1e-8,
    *,
    solver_tol: float = 1e-12,
    workers: int = 1,
    confirm: bool = True,
) -> CollisionReport:
    """Solve every filling on the coprime annulus and compare holonomy sets.

    Fillings use coprime |p_i| + |q_i| in [bound/2, bound] per cusp.  Any
    two fillings whose holonomy multisets agree within tol are reported,
    flagged trivial when the coefficients coincide; nontrivial hits are
    confirmed by an mpmath re-solve at doubled working precision.
    """
    if bound > 60:
        raise BudgetExceeded("scan bound limited to 60 per cusp")
    low = (bound + 1) // 2
    slopes = coprime_slopes(low, bound)
    if not slopes:
        raise BudgetExceeded("empty slope annulus")
    grids: list[tuple[tuple[int, int], ...]] = [()]
    for _ in range(pot.n_cusps):
        grids = [g + (s,) for g in grids for s in slopes]
    if len(grids) > 200_000:
        raise BudgetExceeded(f"grid of {len(grids)} fillings exceeds the scan budget")
    # validate trust radius against the whole annulus up front (a purely
    # quadratic potential is exact everywhere, nothing to validate)
    if pot.coefficients:
        for pairs in grids:
            for (p, q), tau in zip(pairs, pot.shapes):
                if abs(TWO_PI_I / (p + q * tau)) > pot.trust_radius:
                    raise OutOfTrustRadius(
                        f"slope {p}/{q} starts outside trust radius "
                        f"{pot.trust_radius}; raise it or shrink the annulus"
                    )

    if workers > 1:
        from multiprocessing import Pool

        chunks = [grids[i::workers] for i in range(workers)]
        with Pool(workers) as pool:
            parts = pool.map(_scan_worker, [(pot, c, solver_tol) for c in chunks])
        raw = [item for part in parts for item in part]
        raw.sort(key=lambda item: item[0])
    else:
        raw = _scan_worker((pot, grids, solver_tol))

    fillings: list[FillingResult] = []
    failures = []
    for pairs, result, err in raw:
        if result is None:
            failures.append((pairs, err))
        else:
            fillings.append(result)

    keyed = [(core_holonomy_set(r), i) for i, r in enumerate(fillings)]
    keyed.sort(key=lambda kv: (kv[0][0].real, kv[0][0].imag))
    collisions = []
    for a in range(len(keyed)):
        holo_a, ia = keyed[a]
        for b in range(a + 1, len(keyed)):
            holo_b, ib = keyed[b]
            if holo_b[0].real - holo_a[0].real > tol:
                break
            if not holonomy_sets_match(holo_a, holo_b, tol):
                continue
            i, j = min(ia, ib), max(ia, ib)
            fa, fb = fillings[i], fillings[j]
            trivial = fa.coeff.pairs == fb.coeff.pairs
            confirmed = True
            if confirm and not trivial:
                confirmed = _confirm_collision(pot, fa.coeff, fb.coeff, tol)
            collisions.append(
                Collision(
                    index_a=i,
                    index_b=j,
                    coeff_a=fa.coeff.pairs,
                    coeff_b=fb.coeff.pairs,
                    distance=holonomy_set_distance(holo_a, holo_b),
                    trivial=trivial,
                    confirmed=confirmed,
                )
            )
    collisions.sort(key=lambda c: (c.coeff_a, c.coeff_b))
    return CollisionReport(
        bound=bound,
        tol=tol,
        fillings=tuple(fillings),
        collisions=tuple(collisions),
        failures=tuple(failures),
    )


def _confirm_collision(pot, coeff_a, coeff_b, tol) -> bool:
    bits = 106  # doubled double precision
    ra = solve_filling(pot, coeff_a, precision_bits=bits)
    rb = solve_filling(pot, coeff_b, precision_bits=bits)
    ha = [complex(t) for t in ra.holonomies]
    hb = [complex(t) for t in rb.holonomies]
    return holonomy_sets_match(ha, hb, tol)


# ---------------------------------------------------------------------------
# manifold potential files


def _line_of(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def _nth_occurrence_line(text: str, token: str, n: int, start: int = 0) -> int:
    pos = start
    for _ in range(n + 1):
        pos = text.find(token, pos)
        if pos < 0:
            return _line_of(text, start)
        pos += 1
    return _line_of(text, pos - 1)


def loads_manifold(text: str) -> NZPotential:
    """Parse a manifold potential file; all rejections carry a line number."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifoldFileError(f"line {exc.lineno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ManifoldFileError("line 1: top-level value must be an object")

    def fail(token_line: int, message: str):
        raise ManifoldFileError(f"line {token_line}: {message}")

    for key in ("cusps", "shapes", "coefficients", "truncation"):
        if key not in data:
            fail(1, f'missing field "{key}"')
    cusps = data["cusps"]
    if not isinstance(cusps, int) or cusps < 1:
        fail(_nth_occurrence_line(text, '"cusps"', 0), '"cusps" must be a positive integer')
    trunc = data["truncation"]
    trunc_line = _nth_occurrence_line(text, '"truncation"', 0)
    if not isinstance(trunc, int) or trunc < 4 or trunc % 2:
        fail(trunc_line, '"truncation" must be an even integer >= 4')

    shapes_anchor = text.find('"shapes"')
    shapes = data["shapes"]
    if not isinstance(shapes, list) or len(shapes) != cusps:
        fail(_line_of(text, max(shapes_anchor, 0)), f'"shapes" must list {cusps} [re, im] pairs')
    parsed_shapes = []
    for i, entry in enumerate(shapes):
        line = _nth_occurrence_line(text, "[", i + 1, shapes_anchor)
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not all(isinstance(x, (int, float)) for x in entry)
        ):
            fail(line, f"shape {i + 1} must be an [re, im] pair")
        if entry[1] == 0:
            fail(line, f"shape {i + 1} is real (im = 0); cusp shapes must be non-real")
        parsed_shapes.append(complex(entry[0], entry[1]))

    coeffs_anchor = text.find('"coefficients"')
    raw_coeffs = data["coefficients"]
    if not isinstance(raw_coeffs, list):
        fail(_line_of(text, max(coeffs_anchor, 0)), '"coefficients" must be a list')
    coeffs: dict[MultiIndex, complex] = {}
    for i, entry in enumerate(raw_coeffs):
        line = _nth_occurrence_line(text, '"alpha"', i, coeffs_anchor)
        if not isinstance(entry, dict) or "alpha" not in entry or "value" not in entry:
            fail(line, f'coefficient {i + 1} must carry "alpha" and "value"')
        alpha = entry["alpha"]
        value = entry["value"]
        if (
            not isinstance(alpha, list)
            or len(alpha) != cusps
            or not all(isinstance(a, int) for a in alpha)
        ):
            fail(line, f"coefficient {i + 1}: alpha must list {cusps} integers")
        if any(a < 0 or a % 2 for a in alpha):
            fail(line, f"coefficient {i + 1}: exponents must be even and non-negative")
        total = sum(alpha)
        if total == 0:
            fail(line, f"coefficient {i + 1}: constant terms are not allowed")
        if total == 2:
            fail(line, f"coefficient {i + 1}: quadratic terms belong in the shapes")
        if total > trunc:
            fail(line, f"coefficient {i + 1}: degree {total} exceeds truncation {trunc}")
        if (
            not isinstance(value, list)
            or len(value) != 2
            or not all(isinstance(x, (int, float)) for x in value)
        ):
            fail(line, f"coefficient {i + 1}: value must be an [re, im] pair")
        coeffs[tuple(alpha)] = complex(value[0], value[1])

    return NZPotential(
        n_cusps=cusps,
        shapes=tuple(parsed_shapes),
        coefficients=coeffs,
        trunc_degree=trunc,
    )


def load_manifold(path: str) -> NZPotential:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_manifold(fh.read())


def dumps_manifold(pot: NZPotential) -> str:
    data = {
        "cusps": pot.n_cusps,
        "shapes": [[t.real, t.imag] for t in pot.shapes],
        "coefficients": [
            {"alpha": list(a), "value": [m.real, m.imag]}
            for a, m in sorted(pot.coefficients.items())
        ],
        "truncation": pot.trunc_degree,
    }
    return json.dumps(data, indent=2)


def save_manifold(pot: NZPotential, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_manifold(pot))
        fh.write("\n")

"""Command-line front end.

Subcommands: lemma-sweep, classify, cascade, height, northcott, siegel,
multrel, fill, scan, sgi.  Reports are deterministic: identical
arguments (including seeds) produce byte-identical output, every header
carries the defaults in effect, and CSV bodies follow a versioned
schema declared in a comment line.

Exit codes: 0 success; 1 a mathematical invariant was violated by a
sweep (never expected); 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from fractions import Fraction

from . import __version__
from .cusplemmas import BlockMode, CuspBlock, FormTag, classify_block, exhaustive_lemma_sweep
from .errors import LemmaViolation, ZpdehnError
from .exactalg import IntMatrix
from .heights import AlgebraicNumber, bmz_product_report, northcott_enumerate, weil_height
from .lattice import find_multiplicative_relation, siegel_basis
from .nzdehn import (
    FillingCoefficient,
    cosmetic_scan,
    difference_collapse_check,
    load_manifold,
    sgi_check,
    solve_filling,
)
from .sweeps import cascade_sweep, deficient_subset_sweep, dehn_pair_sweep
from .anomalous import ISOLATED, SubgroupSpec, anomaly_verdict, containment_cascade

CSV_SCHEMA = "zpdehn-csv v1"
DEFAULTS = "defaults: truncation=8 tol=1e-08 precision=256"


def _parse_rows(text: str) -> list[list[int]]:
    rows = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        rows.append([int(x) for x in chunk.replace(",", " ").split()])
    if not rows:
        raise ValueError("no rows given")
    return rows


def _parse_coeffs(text: str) -> list[tuple[int, int]]:
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if "/" not in chunk:
            raise ValueError(f"coefficient {chunk!r} is not of the form p/q")
        p_str, q_str = chunk.split("/", 1)
        pairs.append((int(p_str), int(q_str)))
    return pairs


def _workers() -> int:
    raw = os.environ.get("ZPDEHN_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ZpdehnError(f"ZPDEHN_THREADS must be an integer, got {raw!r}")
    return max(1, value)


class Report:
    """Accumulates lines; single writer, deterministic output."""

    def __init__(self, command: str, config: dict, fmt: str):
        self.lines: list[str] = []
        prefix = "# " if fmt == "csv" else ""
        self.lines.append(f"{prefix}zpdehn {__version__} {command}")
        self.lines.append(f"{prefix}{DEFAULTS}")
        cfg = " ".join(f"{k}={v}" for k, v in sorted(config.items()))
        self.lines.append(f"{prefix}config: {cfg}")
        if fmt == "csv":
            self.lines.append(f"# schema: {CSV_SCHEMA}")

    def add(self, line: str = ""):
        self.lines.append(line)

    def write(self, out_path: str | None):
        text = "\n".join(self.lines) + "\n"
        if out_path:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--out", help="write the report to this path instead of stdout")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    p.add_argument("--precision", type=int, default=256, help="working precision in bits")
    p.add_argument("--tol", type=float, default=1e-8)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="zpdehn",
        description="rank classification, heights, lattices and Dehn filling scans",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lemma-sweep", help="run a classification sweep")
    p.add_argument(
        "--lemma",
        required=True,
        choices=("block-classify", "dehn-pair", "deficient-subset", "cascade"),
    )
    p.add_argument("--bound", type=int, default=2, help="entry bound for exhaustive sweeps")
    p.add_argument("--mode", choices=("one-tau", "two-tau"), default="one-tau")
    p.add_argument("--samples", type=int, default=1000)
    _add_common(p)

    p = sub.add_parser("classify", help="classify a 2x4 cusp block")
    p.add_argument("--rows", required=True, help='e.g. "1,2,2,4;0,1,0,2"')
    p.add_argument("--mode", choices=("one-tau", "two-tau"), default="one-tau")
    _add_common(p)

    p = sub.add_parser("cascade", help="containment cascade for a subgroup spec")
    p.add_argument("--rows", required=True, help='exponent rows, e.g. "1,0,0,0;0,1,0,0"')
    p.add_argument("--cusps", type=int, required=True)
    p.add_argument("--check", action="store_true", help="confirm numerically on a synthetic potential")
    _add_common(p)

    p = sub.add_parser("height", help="Weil height of an algebraic number")
    p.add_argument("--minpoly", help='integer coefficients, descending, e.g. "1,-1,-1"')
    p.add_argument("--rational", help="rational number p/q")
    p.add_argument("--root-index", type=int, default=0)
    p.add_argument("--product", action="store_true", help="emit the height-product report over all --minpoly entries")
    _add_common(p)

    p = sub.add_parser("northcott", help="enumerate numbers of bounded height and degree")
    p.add_argument("--hmax", type=float, required=True)
    p.add_argument("--dmax", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("siegel", help="short kernel basis for integer forms")
    p.add_argument("--forms", required=True, help='rows of forms, e.g. "-3,5,-3,5"')
    _add_common(p)

    p = sub.add_parser("multrel", help="multiplicative relation search")
    p.add_argument("--values", required=True, help='comma-separated complex values, e.g. "2,4"')
    p.add_argument("--bound", type=int, default=10, help="exponent bound")
    _add_common(p)

    p = sub.add_parser("fill", help="solve Dehn filling equations")
    p.add_argument("--manifold", required=True)
    p.add_argument("--coeff", required=True, help='p/q per cusp, e.g. "5/3,7/2"')
    p.add_argument("--branch", type=int, choices=(1, -1), default=1)
    p.add_argument("--trust-radius", type=float, help="override the series trust radius")
    _add_common(p)

    p = sub.add_parser("scan", help="cosmetic-surgery collision scan")
    p.add_argument("--manifold", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--trust-radius", type=float, help="override the series trust radius")
    _add_common(p)

    p = sub.add_parser("sgi", help="strong geometric isolation predicates")
    p.add_argument("--manifold", required=True)
    _add_common(p)

    return ap


def _cmd_lemma_sweep(args) -> int:
    mode = BlockMode(args.mode)
    config = {
        "lemma": args.lemma,
        "bound": args.bound,
        "mode": args.mode,
        "samples": args.samples,
        "seed": args.seed,
    }
    rep = Report("lemma-sweep", config, args.format)
    if args.lemma == "block-classify":
        outcome = exhaustive_lemma_sweep(args.bound, mode)
        rep.add(outcome.summary())
        violations = outcome.violations
    elif args.lemma == "dehn-pair":
        outcome = dehn_pair_sweep(args.seed, args.samples, mode)
        rep.add(outcome.summary())
        violations = outcome.violations
    elif args.lemma == "deficient-subset":
        outcome = deficient_subset_sweep(args.seed, args.samples)
        rep.add(outcome.summary())
        violations = outcome.violations
    else:
        outcome = cascade_sweep(args.seed, args.samples)
        rep.add(outcome.summary())
        violations = outcome.violations
    rep.write(args.out)
    return 1 if violations else 0


def _cmd_classify(args) -> int:
    rows = _parse_rows(args.rows)
    if len(rows) != 2 or any(len(r) != 4 for r in rows):
        raise ZpdehnError("classify expects two rows of four integers")
    block = CuspBlock.from_rows(rows[0], rows[1], BlockMode(args.mode))
    form = classify_block(block)
    rep = Report("classify", {"rows": args.rows, "mode": args.mode}, args.format)
    if form.tag is FormTag.PROPORTIONAL:
        rep.add(f"form: proportional m={form.m}")
    else:
        rep.add(f"form: {form.tag.value}")
    rep.write(args.out)
    return 0


def _cmd_cascade(args) -> int:
    rows = _parse_rows(args.rows)
    spec = SubgroupSpec.build(args.cusps, rows)
    verdict = anomaly_verdict(spec)
    outcome = containment_cascade(spec)
    rep = Report(
        "cascade", {"rows": args.rows, "cusps": args.cusps, "check": args.check}, args.format
    )
    rep.add(f"jacobian: {verdict}")
    if outcome is ISOLATED:
        rep.add("verdict: isolated")
    else:
        rep.add(f"verdict: cusp {outcome} (component in M_{outcome} = L_{outcome} = 1)")
        if args.check:
            from .anomalous import continuation_check
            from .nzdehn import synth_potential

            pot = synth_potential(args.seed, args.cusps, trust_radius=0.6)
            ok = continuation_check(spec, pot, outcome, samples=10, seed=args.seed)
            rep.add(f"continuation-check: {'pass' if ok else 'FAIL'}")
            if not ok:
                rep.write(args.out)
                return 1
    rep.write(args.out)
    return 0


def _cmd_height(args) -> int:
    rep = Report(
        "height",
        {
            "minpoly": args.minpoly or "-",
            "rational": args.rational or "-",
            "root_index": args.root_index,
            "product": args.product,
            "precision": args.precision,
        },
        args.format,
    )
    if args.product:
        if not args.minpoly:
            raise ZpdehnError("--product requires --minpoly entries separated by ';'")
        numbers = [
            AlgebraicNumber(tuple(int(x) for x in chunk.replace(",", " ").split()), 0, args.precision)
            for chunk in args.minpoly.split(";")
        ]
        rep.add(bmz_product_report(numbers).summary())
        rep.write(args.out)
        return 0
    if args.rational:
        frac = Fraction(args.rational)
        number = AlgebraicNumber.from_rational(frac, args.precision)
    elif args.minpoly:
        coeffs = tuple(int(x) for x in args.minpoly.replace(",", " ").split())
        number = AlgebraicNumber(coeffs, args.root_index, args.precision)
    else:
        raise ZpdehnError("height needs --minpoly or --rational")
    h = weil_height(number)
    rep.add(f"minpoly: {','.join(str(c) for c in number.minpoly)}")
    rep.add(f"height: {h.value:.15f}")
    rep.add(f"error-bound: {h.error_bound:.3e}")
    rep.write(args.out)
    return 0


def _cmd_northcott(args) -> int:
    rep = Report("northcott", {"hmax": args.hmax, "dmax": args.dmax}, args.format)
    numbers = northcott_enumerate(args.hmax, args.dmax, args.precision)
    if args.format == "csv":
        rep.add("minpoly,root_index,height")
        for a in numbers:
            h = weil_height(a)
            rep.add(f"\"{' '.join(str(c) for c in a.minpoly)}\",{a.root_index},{h.value:.12f}")
    else:
        rep.add(f"count: {len(numbers)}")
        for a in numbers:
            h = weil_height(a)
            rep.add(
                f"minpoly {','.join(str(c) for c in a.minpoly)} root {a.root_index} "
                f"height {h.value:.12f}"
            )
    rep.write(args.out)
    return 0


def _cmd_siegel(args) -> int:
    rows = _parse_rows(args.forms)
    basis, ratio = siegel_basis(IntMatrix.from_rows(rows))
    rep = Report("siegel", {"forms": args.forms}, args.format)
    if args.format == "csv":
        rep.add("vector,norm")
        for vec, norm in zip(basis.vectors, basis.norms):
            rep.add(f"\"{' '.join(str(x) for x in vec)}\",{norm:.12f}")
    else:
        for vec, norm in zip(basis.vectors, basis.norms):
            rep.add(f"vector {vec} norm {norm:.6f}")
    rep.add(f"ratio: {ratio:.9f}" if args.format == "text" else f"# ratio: {ratio:.9f}")
    rep.write(args.out)
    return 0


def _cmd_multrel(args) -> int:
    values = [complex(chunk.strip()) for chunk in args.values.split(",")]
    rel = find_multiplicative_relation(values, args.bound, args.precision)
    rep = Report(
        "multrel",
        {"values": args.values, "bound": args.bound, "precision": args.precision},
        args.format,
    )
    if rel is None:
        rep.add("relation: none found (evidence, not proof)")
    else:
        rep.add(f"relation: exponents {rel.exponents} residual {rel.residual:.3e}")
    rep.write(args.out)
    return 0


def _cmd_fill(args) -> int:
    pot = load_manifold(args.manifold)
    if args.trust_radius is not None:
        pot = replace(pot, trust_radius=args.trust_radius)
    pairs = _parse_coeffs(args.coeff)
    coeff = FillingCoefficient.build(pairs)
    result = solve_filling(pot, coeff, branch=args.branch)
    rep = Report(
        "fill",
        {
            "manifold": args.manifold,
            "coeff": args.coeff,
            "branch": args.branch,
            "trust_radius": args.trust_radius if args.trust_radius is not None else "default",
        },
        args.format,
    )
    for i in range(pot.n_cusps):
        rep.add(
            f"cusp {i + 1}: slope {coeff.pairs[i][0]}/{coeff.pairs[i][1]} "
            f"u {result.u[i]:.15g} v {result.v[i]:.15g} t {result.holonomies[i]:.15g}"
        )
    rep.add(f"residual: {result.residual:.3e}")
    rep.add(f"newton-iterations: {result.newton_iters}")
    rep.write(args.out)
    return 0


def _cmd_scan(args) -> int:
    pot = load_manifold(args.manifold)
    if args.trust_radius is not None:
        pot = replace(pot, trust_radius=args.trust_radius)
    report = cosmetic_scan(pot, args.bound, args.tol, workers=_workers())
    rep = Report(
        "scan",
        {
            "manifold": args.manifold,
            "bound": args.bound,
            "tol": args.tol,
            "trust_radius": args.trust_radius if args.trust_radius is not None else "default",
        },
        args.format,
    )
    if args.format == "csv":
        rep.add("coeff_a,coeff_b,distance,trivial,confirmed")
        for c in report.collisions:
            a = ";".join(f"{p}/{q}" for p, q in c.coeff_a)
            b = ";".join(f"{p}/{q}" for p, q in c.coeff_b)
            rep.add(f"{a},{b},{c.distance:.3e},{c.trivial},{c.confirmed}")
    else:
        rep.add(f"fillings: {len(report.fillings)}")
        rep.add(f"collisions: {len(report.collisions)}")
        rep.add(f"nontrivial: {len(report.nontrivial)}")
        for c in report.collisions:
            rep.add(
                f"collision {c.coeff_a} ~ {c.coeff_b} distance {c.distance:.3e} "
                f"trivial={c.trivial} confirmed={c.confirmed}"
            )
        if report.failures:
            rep.add(f"failures: {len(report.failures)}")
    rep.write(args.out)
    confirmed_nontrivial = [c for c in report.nontrivial if c.confirmed]
    return 1 if confirmed_nontrivial else 0


def _cmd_sgi(args) -> int:
    pot = load_manifold(args.manifold)
    rep = Report("sgi", {"manifold": args.manifold}, args.format)
    rep.add(f"sgi: {sgi_check(pot)}")
    rep.add(f"difference-collapse: {difference_collapse_check(pot)}")
    rep.write(args.out)
    return 0


_HANDLERS = {
    "lemma-sweep": _cmd_lemma_sweep,
    "classify": _cmd_classify,
    "cascade": _cmd_cascade,
    "height": _cmd_height,
    "northcott": _cmd_northcott,
    "siegel": _cmd_siegel,
    "multrel": _cmd_multrel,
    "fill": _cmd_fill,
    "scan": _cmd_scan,
    "sgi": _cmd_sgi,
}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except LemmaViolation as exc:
        print(f"zpdehn: invariant violation: {exc}", file=sys.stderr)
        return 1
    except ZpdehnError as exc:
        print(f"zpdehn: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"zpdehn: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

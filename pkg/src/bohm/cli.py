"""Command-line driver wiring enumeration, classification, spectra, heights, render.

Exit codes: 0 success, 1 verification mismatch, 2 usage errors, 3 budget or
guard violations.  Identical flags (and seed) produce byte-identical output
files; database files sort canonically, so shard counts never change bytes.
"""
from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from .charpoly import DimensionGuardError, charpoly_oracle, charpoly_thm1, charpoly_thm2
from .classify import classify_cpdb
from .cpdb import Cpdb, FamilyMismatchError
from .enumeration import BudgetError, enumerate_to_cpdb, family_size, make_shards
from .family import FamilySpec, HessMatrix, Population, Shape
from .gaussint import parse_gauss
from .heights import (LOG_GOLDEN_PLUS_ONE, SeriesGuardError, ratio_convergence_onset,
                      tau_series, write_ratio_csv)
from .render import DensityGrid, accumulate, write_bins_csv, write_image
from .spectra import distinct_real_eigs, eigenvalue_csv, multiplicity_table

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _add_family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True, help="matrix dimension")
    p.add_argument("--pop", required=True,
                   help="population, comma-separated (e.g. -1,0,1 or 0,i,-i)")
    p.add_argument("--subdiag", default="+1", help="subdiagonal unit (+1, -1, i, -i)")
    p.add_argument("--zero-diag", action="store_true", help="pin the diagonal to 0")
    p.add_argument("--shape", choices=["hessenberg", "general"], default="hessenberg")


def _family_from_args(args) -> FamilySpec:
    pop = Population.from_text(args.pop)
    if args.shape == "general":
        return FamilySpec(args.n, pop, shape=Shape.GENERAL)
    return FamilySpec(args.n, pop, subdiag=parse_gauss(args.subdiag),
                      zero_diagonal=args.zero_diag)


def _load_or_enumerate(args) -> Cpdb:
    if getattr(args, "db", None):
        return Cpdb.load(args.db)
    spec = _family_from_args(args)
    return enumerate_to_cpdb(spec, shards=getattr(args, "shards", 1),
                             budget=getattr(args, "budget", None))


def cmd_enumerate(args) -> int:
    spec = _family_from_args(args)
    db = enumerate_to_cpdb(spec, shards=args.shards, budget=args.budget)
    if args.out:
        db.save(args.out)
    print(f"matrices={db.num_matrices} cpolys={db.num_polys}")
    return EXIT_OK


def cmd_classify(args) -> int:
    db = _load_or_enumerate(args)
    report = classify_cpdb(db)
    if args.real_eigs:
        report.distinct_real_eigs = distinct_real_eigs(db.family, db=db)
    rows = [
        ("matrices", report.matrices),
        ("cpolys", report.cpolys),
        ("neutral polys", report.neutral_polys),
        ("neutral matrices", report.neutral_matrices),
        ("stable polys", report.stable_polys),
        ("stable matrices", report.stable_matrices),
        ("nilpotent matrices", report.nilpotent_matrices),
        ("singular polys", report.singular_polys),
        ("singular matrices", report.singular_matrices),
    ]
    if report.distinct_real_eigs is not None:
        rows.append(("distinct real eigs", report.distinct_real_eigs))
    width = max(len(k) for k, _ in rows)
    print(f"family: {report.family}")
    for k, v in rows:
        print(f"  {k:<{width}}  {v}")
    if args.csv:
        header = ",".join(k.replace(" ", "_") for k, _ in rows)
        values = ",".join(str(v) for _, v in rows)
        Path(args.csv).write_text(f"family,{header}\n{report.family},{values}\n",
                                  encoding="utf-8")
    return EXIT_OK


def cmd_spectra(args) -> int:
    db = _load_or_enumerate(args)
    spec = db.family
    table = multiplicity_table(spec, db=db)
    line = " ".join(f"{k}:{table.counts.get(k, 0)}" for k in range(1, spec.n + 1))
    print(f"multiplicities {line}")
    n_real = distinct_real_eigs(spec, db=db)
    print(f"distinct_real_eigs={n_real}")
    if args.csv:
        eigenvalue_csv(spec, args.csv, db=db)
    return EXIT_OK


def cmd_heights(args) -> int:
    series = tau_series(args.max_n, mode=args.mode)
    if args.csv:
        write_ratio_csv(series, args.csv)
    n, final = series.ratios()[-1]
    onset = ratio_convergence_onset(series)
    print(f"ratio[{n}]={final:.9f} limit={LOG_GOLDEN_PLUS_ONE:.9f} "
          f"onset_1e-3={onset}")
    return EXIT_OK


def cmd_render(args) -> int:
    db = _load_or_enumerate(args)
    grid = DensityGrid(-args.window, args.window, -args.window, args.window,
                       args.pixels, args.pixels)
    accumulate(grid, db, weighting=args.weighting)
    write_image(grid, args.out, palette=args.palette, gamma=args.gamma)
    if args.csv:
        write_bins_csv(grid, args.csv)
    print(f"hits={grid.total_hits()} overflow={grid.overflow} out={args.out}")
    return EXIT_OK


def cmd_db(args) -> int:
    if args.action == "merge":
        dbs = [Cpdb.load(p) for p in args.inputs]
        merged = dbs[0]
        for other in dbs[1:]:
            merged = merged.merge(other)
        merged.save(args.out)
        print(f"matrices={merged.num_matrices} cpolys={merged.num_polys}")
        return EXIT_OK
    # query
    from . import classify as _cls

    predicates = {
        "singular": _cls.is_singular,
        "neutral": _cls.is_neutral,
        "nilpotent": _cls.is_nilpotent,
        "stable": _cls.is_stable_type1,
    }
    db = Cpdb.load(args.inputs[0])
    polys, matrices = db.query(predicates[args.predicate])
    print(f"polys={polys} matrices={matrices}")
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = _family_from_args(args)
    rng = random.Random(args.seed)
    pop = list(spec.population)
    free = spec.free_positions()
    mismatches = 0
    for _ in range(args.samples):
        chosen = {pos: rng.choice(pop) for pos in free}
        upper = []
        for j in range(1, spec.n + 1):
            for i in range(1, j + 1):
                from .gaussint import ZERO

                upper.append(chosen.get((i, j), ZERO))
        m = HessMatrix(spec, upper)
        p1 = charpoly_thm1(m)
        p2 = charpoly_thm2(m)
        po = charpoly_oracle(m)
        if not (p1.coeffs == p2.coeffs == po.coeffs):
            mismatches += 1
            print(f"MISMATCH {m!r}: {p1} | {p2} | {po}", file=sys.stderr)
    print(f"samples={args.samples} mismatches={mismatches}")
    return EXIT_OK if mismatches == 0 else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bohm",
        description="exact enumeration and classification of Bohemian upper "
                    "Hessenberg matrix families",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="enumerate a family into a polynomial database")
    _add_family_flags(p)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--out", default=None, help="database file to write")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify", help="classification tallies for a family")
    _add_family_flags(p)
    p.add_argument("--db", default=None, help="existing database (skips enumeration)")
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--real-eigs", action="store_true",
                   help="also count distinct real eigenvalues")
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("spectra", help="multiplicity table and real-eigenvalue count")
    _add_family_flags(p)
    p.add_argument("--db", default=None)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--csv", default=None, help="eigenvalue CSV output")
    p.set_defaults(func=cmd_spectra)

    p = sub.add_parser("heights", help="maximal characteristic height growth series")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--mode", choices=["exact", "log-float"], default="exact")
    p.add_argument("--csv", default=None, help="ratio CSV output")
    p.set_defaults(func=cmd_heights)

    p = sub.add_parser("render", help="eigenvalue density image")
    _add_family_flags(p)
    p.add_argument("--db", default=None)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--out", required=True, help="PGM/PPM output path")
    p.add_argument("--pixels", type=int, default=1025)
    p.add_argument("--window", type=float, default=3.5,
                   help="half-width of the centered square window")
    p.add_argument("--palette", choices=["gray", "fire"], default="gray")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--weighting", choices=["matrix-count", "unit"],
                   default="matrix-count")
    p.add_argument("--csv", default=None, help="nonzero-bin CSV output")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("db", help="merge or query database files")
    p.add_argument("action", choices=["merge", "query"])
    p.add_argument("inputs", nargs="+", help="database file(s)")
    p.add_argument("--out", default=None, help="merged output (merge)")
    p.add_argument("--predicate", choices=["singular", "neutral", "nilpotent", "stable"],
                   default="singular")
    p.set_defaults(func=cmd_db)

    p = sub.add_parser("verify", help="cross-check the recurrences against the oracle")
    _add_family_flags(p)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "db" and args.action == "merge" and not args.out:
        ap.error("db merge requires --out")
    try:
        return args.func(args)
    except (BudgetError, SeriesGuardError, DimensionGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (FamilyMismatchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: shells, theta, strength, scan, design, tables, congruence."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    lattice: str | None
    out: Path | None
    fmt: str
    threads: int
    cache_dir: Path | None


def parse_range(text: str) -> tuple[int, int]:
    """'7' -> (7, 7); '1..1000' -> (1, 1000)."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad range {text!r}; use N or A..B") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"range {text!r} must satisfy 1 <= A <= B")
    return lo, hi


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _positive(name: str, v: int | None):
    if v is not None and v < 1:
        raise UsageError(f"--{name} must be positive")


def _emit(cfg: RunConfig, text: str):
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.parent.mkdir(parents=True, exist_ok=True)
        cfg.out.write_text(text)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_shells(cfg: RunConfig, args) -> int:
    from .lattices import enumerate_shell, shell_to_csv
    _positive("two-m", args.two_m)
    shell = enumerate_shell(cfg.lattice, args.two_m)
    _emit(cfg, shell_to_csv(shell))
    return EXIT_OK


def cmd_theta(cfg: RunConfig, args) -> int:
    from .harmonics import Polynomial, ZonalHarmonic
    from .lattices import get_lattice
    from .theta import image_rank, p4_polynomial, weighted_theta
    spec = get_lattice(cfg.lattice)
    if args.image_rank:
        if args.degree is None:
            raise UsageError("--image-rank needs --degree")
        rep = image_rank(spec, args.degree, samples=args.samples, coeff_depth=args.depth,
                         seed=args.seed)
        _emit(cfg, _dumps(rep.to_json()))
        if rep.expected_dim is not None and not (rep.matches_expected and rep.stabilized):
            return EXIT_MISMATCH
        return EXIT_OK
    _positive("m-max", args.m_max)
    if args.poly:
        weight = Polynomial.from_json(Path(args.poly).read_text())
    elif args.p4:
        weight = p4_polynomial(spec.dim)
    elif args.axis:
        if args.degree is None:
            raise UsageError("--axis needs --degree")
        axis = tuple(_ints(args.axis))
        if len(axis) != spec.dim:
            raise UsageError(f"axis needs {spec.dim} entries")
        weight = ZonalHarmonic(spec.dim, args.degree, axis)
    else:
        weight = Polynomial.monomial((0,) * spec.dim)
    th = weighted_theta(spec, weight, args.m_max)
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "coefficient"])
        for m, c in enumerate(th.series):
            w.writerow([m, str(c)])
        _emit(cfg, buf.getvalue())
    else:
        _emit(cfg, _dumps(th.to_json()))
    return EXIT_OK


def cmd_strength(cfg: RunConfig, args) -> int:
    from .lattices import get_lattice
    from .strength import appendix_strength_scan
    from .tables import STRENGTH_ROWS
    spec = get_lattice(cfg.lattice)
    lo, hi = parse_range(args.m)
    _positive("max-degree", args.max_degree)
    reports = appendix_strength_scan(spec, hi, args.max_degree, method=args.method,
                                     checkpoint=args.checkpoint, m_min=lo)
    expected = None
    if spec.name in STRENGTH_ROWS and args.max_degree <= STRENGTH_ROWS[spec.name][0]:
        expected = frozenset(l for l in STRENGTH_ROWS[spec.name][1] if l <= args.max_degree)
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "members", "inconclusive"])
        for r in reports:
            w.writerow([r.m, " ".join(map(str, sorted(r.member_degrees))),
                        " ".join(map(str, sorted(r.inconclusive_degrees)))])
        _emit(cfg, buf.getvalue())
    else:
        _emit(cfg, "".join(r.dumps() + "\n" for r in reports))
    if expected is not None and any(r.member_degrees != expected for r in reports):
        return EXIT_MISMATCH
    return EXIT_OK


CRITERIA = ("tau2", "tau2-nonvanishing", "leech", "bw16", "d4-degree6", "e8-degree8", "z2", "a2",
            "primes")


def cmd_scan(cfg: RunConfig, args) -> int:
    from . import strength as st
    c = args.criterion
    _positive("m-max", args.m_max)
    if c in ("tau2", "tau2-nonvanishing"):
        res = st.tau2_nonvanishing_scan(args.m_max, checkpoint=args.checkpoint)
        out, bad = res.to_json(), not res.clean
    elif c in ("leech", "bw16"):
        leech, bw = st.convolution_criteria(args.m_max)
        res = leech if c == "leech" else bw
        out, bad = res.to_json(), not res.clean
    elif c == "d4-degree6":
        rows = st.theorem1_check(args.m_max)
        out = {"criterion": c, "m_max": args.m_max,
               "violations": [r.m for r in rows if not r.consistent],
               "zero_positions": [r.m for r in rows if r.coefficient == 0]}
        bad = bool(out["violations"])
    elif c == "e8-degree8":
        rows = st.e8_corollary_check(args.m_max)
        out = {"criterion": c, "m_max": args.m_max,
               "violations": [r.m for r in rows if not r.consistent],
               "zero_positions": [r.m for r in rows if r.coefficient == 0]}
        bad = bool(out["violations"])
    elif c in ("z2", "a2"):
        rows = st.two_dim_strength_check(c.upper(), args.m_max, args.max_degree or 20)
        out = {"criterion": c, "m_max": args.m_max, "shells": len(rows),
               "mismatches": [r.m for r in rows if not r.ok]}
        bad = bool(out["mismatches"])
    elif c == "primes":
        rows = st.prime_nonvanishing_region(args.m_max)
        out = {"criterion": c, "p_max": args.m_max,
               "certified": sum(r.certified for r in rows),
               "not_certified": [r.p for r in rows if not r.certified],
               "zeros": [r.p for r in rows if not r.nonzero]}
        bad = bool(out["zeros"]) or any(r.certified and not r.nonzero for r in rows)
    else:
        raise UsageError(f"unknown criterion {c!r}; choose from {', '.join(CRITERIA)}")
    _emit(cfg, _dumps(out))
    return EXIT_MISMATCH if bad and args.expect_clean else EXIT_OK


def cmd_design(cfg: RunConfig, args) -> int:
    from .designs import PointSet, design_verdict, half_set, inner_product_set, is_antipodal
    from .lattices import read_shell_csv
    header, pts = read_shell_csv(Path(args.points))
    X = PointSet.from_points(pts)
    degrees = _ints(args.degrees)
    if not degrees or min(degrees) < 1:
        raise UsageError("--degrees needs positive integers")
    v = design_verdict(X, degrees, args.method)
    out = {"points": len(X), "dim": X.dim, "antipodal": is_antipodal(X),
           "degrees_checked": v.degrees_checked, "members": v.members, "method": v.method,
           "certificates": {str(k): c for k, c in v.certificates.items()},
           "inner_products": sorted(str(a) for a in inner_product_set(X))}
    if out["antipodal"]:
        H = half_set(X)
        out["half_set"] = {"points": len(H),
                           "inner_products": sorted(str(a) for a in inner_product_set(H))}
    _emit(cfg, _dumps(out))
    return EXIT_OK


def cmd_tables(cfg: RunConfig, args) -> int:
    from .lattices import shell_size
    from .tables import CARDINALITY_ROWS, DIMENSION_ROWS
    from .theta import image_rank
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    mismatches = 0

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lattice", "degree", "computed", "expected", "stabilized", "status"])
    for name, row in DIMENSION_ROWS.items():
        for k, exp in enumerate(row):
            l = 2 * k + 2
            rep = image_rank(name, l, expected_dim=exp)
            ok = rep.rank_lower_bound == exp and rep.stabilized
            mismatches += not ok
            w.writerow([name, l, rep.rank_lower_bound, exp, rep.stabilized, "ok" if ok else "MISMATCH"])
    (outdir / "dimension_table.csv").write_text(buf.getvalue())

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lattice", "m", "computed", "expected", "status"])
    for name, row in CARDINALITY_ROWS.items():
        for m, exp in enumerate(row, start=1):
            got = shell_size(name, 2 * m)
            mismatches += got != exp
            w.writerow([name, m, got, exp, "ok" if got == exp else "MISMATCH"])
    (outdir / "cardinality_table.csv").write_text(buf.getvalue())
    sys.stdout.write(f"wrote {outdir}/dimension_table.csv and {outdir}/cardinality_table.csv; "
                     f"{mismatches} mismatching cells\n")
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_congruence(cfg: RunConfig, args) -> int:
    from .strength import congruence_certificate
    rows = congruence_certificate(args.p_max, args.d8_prime_max)
    fails = [r.p for r in rows if not (r.mod3_ok and r.mod5_ok) or r.d8_ok is False]
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "tau2", "mod3_ok", "mod5_ok", "d8_value", "d8_ok"])
        for r in rows:
            w.writerow([r.p, str(r.tau2), r.mod3_ok, r.mod5_ok,
                        "" if r.d8_value is None else str(r.d8_value), "" if r.d8_ok is None else r.d8_ok])
        _emit(cfg, buf.getvalue())
    else:
        _emit(cfg, _dumps({"p_max": args.p_max, "primes": len(rows), "failures": fails,
                           "d8_route": {str(r.p): str(r.d8_value) for r in rows if r.d8_value is not None}}))
    return EXIT_MISMATCH if fails else EXIT_OK


COMMANDS = {"shells": cmd_shells, "theta": cmd_theta, "strength": cmd_strength, "scan": cmd_scan,
            "design": cmd_design, "tables": cmd_tables, "congruence": cmd_congruence}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="output file (default: stdout)")
    common.add_argument("--format", dest="fmt", choices=("json", "jsonl", "csv"), default=None)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="accepted and validated; computation runs sequentially")
    common.add_argument("--cache-dir", type=Path, default=None,
                        help="persist enumerated shells here (or set SHELLSTRENGTH_CACHE)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="shellstrength",
                                description="Harmonic strength of lattice shells.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("shells", parents=[common], help="enumerate a shell as CSV")
    s.add_argument("--lattice", required=True)
    s.add_argument("--two-m", type=int, required=True)

    s = sub.add_parser("theta", parents=[common], help="weighted theta series or image rank")
    s.add_argument("--lattice", required=True)
    s.add_argument("--m-max", type=int, default=10)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--poly", help="polynomial JSON file")
    g.add_argument("--p4", action="store_true", help="use 7 sum x^4 - 6 sum x_i^2 x_j^2")
    g.add_argument("--axis", help="zonal harmonic axis, comma-separated")
    g.add_argument("--image-rank", action="store_true", help="report the theta-map image rank")
    s.add_argument("--degree", type=int)
    s.add_argument("--samples", type=int)
    s.add_argument("--depth", type=int)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("strength", parents=[common], help="strength of shells, one record per m")
    s.add_argument("--lattice", required=True)
    s.add_argument("--m", required=True, help="N or A..B")
    s.add_argument("--max-degree", type=int, required=True)
    s.add_argument("--method", choices=("auto", "direct", "lifted"), default="auto")
    s.add_argument("--checkpoint", type=Path)

    s = sub.add_parser("scan", parents=[common], help="coefficient criteria scans")
    s.add_argument("--criterion", required=True, choices=CRITERIA)
    s.add_argument("--m-max", type=int, required=True)
    s.add_argument("--max-degree", type=int)
    s.add_argument("--checkpoint", type=Path)
    s.add_argument("--no-expect-clean", dest="expect_clean", action="store_false",
                   help="exit 0 even if zeros or violations are found")

    s = sub.add_parser("design", parents=[common], help="design checks on a point CSV")
    s.add_argument("--points", required=True)
    s.add_argument("--degrees", default="1,2,3,4,5,6,7,8,9,10")
    s.add_argument("--method", choices=("harmonic", "kernel", "both"), default="both")

    s = sub.add_parser("tables", parents=[common], help="dimension and cardinality tables with diffs")
    s.add_argument("--out-dir", default="tables")

    s = sub.add_parser("congruence", parents=[common], help="tau_2 congruences mod 3 and 5")
    s.add_argument("--p-max", type=int, default=10_000)
    s.add_argument("--d8-prime-max", type=int, default=7)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.threads < 1:
            raise UsageError("--threads must be positive")
        if args.cache_dir is not None:
            os.environ["SHELLSTRENGTH_CACHE"] = str(args.cache_dir)
        lattice = getattr(args, "lattice", None)
        if lattice is not None:
            from .lattices import UnknownLattice, get_lattice
            try:
                get_lattice(lattice)
            except UnknownLattice as exc:
                raise UsageError(str(exc.args[0])) from None
        default_fmt = {"shells": "csv", "strength": "jsonl"}.get(args.command, "json")
        cfg = RunConfig(args.command, lattice, args.out, args.fmt or default_fmt,
                        args.threads, args.cache_dir)
        return COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

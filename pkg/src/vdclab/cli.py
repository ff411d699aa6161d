"""Command-line surface: vdc-lab {ineq, witness, spectral, divis, recur,
udtest, seq}.

Exit codes: 0 = computed; 1 = usage or input error; 2 = a mathematical
property that should always hold failed (an inequality violation or
imaginary dust above threshold), so CI can tell implementation bugs
from bad inputs.  Every random demo requires an explicit --seed, and
identical argv + seed produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
from fractions import Fraction

import numpy as np

from . import correlations, divisibility, dynamics, families, inequalities
from . import measures as measures_mod
from . import posdef, reports, sequences
from .exactreal import approx_constant
from .lattice import FiniteSet, read_finite_set

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2

NAMED_SEQUENCES = {
    "naturals": {"kind": "polynomial-tuple", "polys": [[0, 1]]},
    "squares": {"kind": "polynomial-tuple", "polys": [[0, 0, 1]]},
    "cubes": {"kind": "polynomial-tuple", "polys": [[0, 0, 0, 1]]},
    "odds": {"kind": "polynomial-tuple", "polys": [[-1, 2]]},
    "evens": {"kind": "polynomial-tuple", "polys": [[0, 2]]},
    "primesm1": {"kind": "shifted-prime", "polys": [[0, 1]], "shift": -1},
    "primesp1": {"kind": "shifted-prime", "polys": [[0, 1]], "shift": 1},
    "morse": {"kind": "morse"},
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the report contract
    # reserves 2 for property violations, so remap to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit_Usage(message)


class SystemExit_Usage(Exception):
    pass


def _sequence_spec(text: str) -> sequences.SequenceSpec:
    key = text.strip().lower()
    if key in NAMED_SEQUENCES:
        return sequences.spec_from_json(NAMED_SEQUENCES[key])
    return sequences.spec_from_json(text)


def _emit(args, report: dict, kind: str) -> None:
    fmt = args.format
    if args.out:
        reports.write_report(report, fmt, args.out, kind=kind)
    else:
        reports.write_report(report, fmt, sys.stdout, kind=kind)


def _parse_index(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(","))


def _demo_family(args, n):
    demo = args.demo
    if demo == "constant":
        return families.constant_family(n)
    if demo == "alternating":
        return families.alternating_family(n)
    if demo == "random":
        if args.seed is None:
            raise ValueError("--demo random requires an explicit --seed")
        if getattr(args, "vector", 0):
            return families.random_unit_vector_family(n, args.vector, args.seed)
        return families.random_unimodular_family(n, args.seed)
    raise ValueError(f"unknown demo family {demo!r}")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_ineq(args) -> int:
    if args.form == "box":
        n = _parse_index(args.N)
        h = _parse_index(args.H)
        u = _demo_family(args, n)
        report = inequalities.check_box_vdc(u, n, h)
        _emit(args, report, "box-vdc")
        return EXIT_OK if report["holds"] else EXIT_VIOLATION
    if args.form == "group":
        orders = _parse_index(args.group)
        full = FiniteSet(tuple(itertools.product(*(range(m) for m in orders))))
        e_set = full if args.E == "all" else read_finite_set(args.E)
        d_set = full if args.D == "all" else read_finite_set(args.D)
        if args.demo == "random":
            if args.seed is None:
                raise ValueError("--demo random requires an explicit --seed")
            u = families.random_group_values(orders, args.seed)
        else:
            u = {pt: 1.0 + 0j for pt in itertools.product(*(range(m) for m in orders))}
        report = inequalities.check_group_vdc(orders, e_set, d_set, u)
        _emit(args, report, "group-vdc")
        return EXIT_OK if report["holds"] else EXIT_VIOLATION
    # general
    n = _parse_index(args.N)
    u = _demo_family(args, n)
    if args.family:
        weights = posdef.family_from_json(args.family)
    else:
        weights = posdef.fejer_family(_parse_index(args.H))
    report = inequalities.check_generalized_vdc(u, n, weights)
    _emit(args, report, "generalized-vdc")
    return EXIT_OK if report["holds"] else EXIT_VIOLATION


def _cmd_witness(args) -> int:
    if args.search:
        d_set = read_finite_set(args.set)
        report = posdef.witness_search(
            d_set, Fraction(args.eps), grid=args.grid, jobs=args.jobs
        )
        family = report.pop("family", None)
        if family is not None:
            report["family"] = posdef.family_to_json(family)
        _emit(args, report, "witness-search")
        return EXIT_OK
    if args.verify:
        family = posdef.family_from_json(args.family)
        d_set = read_finite_set(args.set)
        report = posdef.verify_kmf_witness(
            family, d_set, float(Fraction(args.eps)), jobs=args.jobs
        )
        _emit(args, report, "witness-verify")
        return EXIT_OK
    if args.from_seq:
        spec = _sequence_spec(args.seq)
        family = posdef.kmf_witness_from_sequence(spec, args.q, args.count)
        report = {
            "q": args.q,
            "count": args.count,
            "support_size": len(family.entries),
            "family": posdef.family_to_json(family),
        }
        _emit(args, report, "witness-from-seq")
        return EXIT_OK
    raise ValueError("choose one of --search, --verify, --from-seq")


def _cmd_spectral(args) -> int:
    measure = measures_mod.measure_from_json(args.measure)
    if args.set:
        d_seq = measures_mod.spectrum_sequence_from_set(read_finite_set(args.set))
    else:
        spec = _sequence_spec(args.seq)
        d_seq = sequences.generate(spec, args.M)
    m_count = args.M or len(d_seq)
    report = measures_mod.spectral_test(measure, d_seq, m_count, args.mode, tol=args.tol)
    _emit(args, report, "spectral")
    return EXIT_OK


def _cmd_divis(args) -> int:
    if args.construct:
        a, b, d = (int(x) for x in args.construct)
        n = divisibility.appendix_construct(a, b, d)
        value = a * divisibility.APPENDIX_P(n) + b * divisibility.APPENDIX_Q(n)
        report = {"a": a, "b": b, "d": d, "n": n, "value": str(value), "verified": True}
        _emit(args, report, "divis-construct")
        return EXIT_OK
    polys = [divisibility.poly_from_text(p) for p in args.polys]
    if args.q:
        witness = divisibility.simultaneous_divisible(polys, args.q)
        report = {
            "q": args.q,
            "witness": witness,
            "simultaneously_divisible": witness is not None,
        }
        _emit(args, report, "divis-single")
        return EXIT_OK
    report = divisibility.divisible_up_to(polys, args.upto)
    _emit(args, report, "divis-upto")
    return EXIT_OK


def _cmd_recur(args) -> int:
    system = dynamics.parse_system(args.system)
    a_set = dynamics.parse_set(system, args.set)
    if args.orbit:
        if args.seed is None:
            raise ValueError("--orbit requires an explicit --seed")
        lags = [int(t) for t in args.lags.split(",")] if args.lags else [1]
        report = dynamics.random_block_orbit(system, a_set, args.seed, args.N, lags)
        report.pop("u")  # the raw 0/1 sequence is not part of the report
        _emit(args, report, "block-orbit")
        return EXIT_OK
    spec = _sequence_spec(args.seq)
    terms = sequences.generate(spec, args.M)
    d_seq = [t[0] for t in terms]
    report = dynamics.recurrence_test(
        system, a_set, d_seq, args.M, mode=args.mode, eps=args.eps
    )
    _emit(args, report, "recurrence")
    return EXIT_OK


def _cmd_udtest(args) -> int:
    alpha = approx_constant(args.alpha)
    coeffs = ["0"] * args.degree + [alpha]
    spec = sequences.SequenceSpec("real-polynomial", coeffs=tuple(approx_constant(c) for c in coeffs))
    xs = sequences.real_mod1_sequence(spec, args.N)
    weyl = correlations.weyl_test(xs, args.N, args.kmax, tol=args.tol)
    disc = correlations.discrepancy_star(xs, args.N)
    report = dict(weyl)
    report["discrepancy_star"] = disc
    _emit(args, report, "udtest")
    return EXIT_OK


def _cmd_seq(args) -> int:
    spec = _sequence_spec(args.spec)
    if spec.kind == "real-polynomial":
        xs = sequences.real_mod1_sequence(spec, args.count)
        report = {"kind": spec.kind, "count": args.count, "values": [float(x) for x in xs]}
    else:
        terms = sequences.generate(spec, args.count)
        report = {
            "kind": spec.kind,
            "count": args.count,
            "terms": [list(t) for t in terms],
        }
    _emit(args, report, "sequence")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser assembly


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the report to this path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser(defaults: dict | None = None) -> argparse.ArgumentParser:
    parser = _Parser(prog="vdc-lab", description=__doc__)
    parser.add_argument("--config", help="key=value config file with flag defaults")
    parser.add_argument(
        "--jobs",
        type=int,
        default=int(os.environ.get("VDCLAB_JOBS", "1")),
        help="worker parallelism inside grid certification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ineq", help="correlation inequalities: box (Fejer-weighted) / finite group / generalized positive-definite form")
    p.add_argument("--form", choices=("box", "group", "general"), required=True)
    p.add_argument("--N", default="8,8", help="window, comma-separated")
    p.add_argument("--H", default="2,2", help="averaging parameter or Fejer bound")
    p.add_argument("--demo", choices=("constant", "alternating", "random"), default="constant")
    p.add_argument("--seed", type=int)
    p.add_argument("--vector", type=int, default=0, help="vector-valued demo in R^k")
    p.add_argument("--group", default="5", help="cyclic orders, e.g. 7,3")
    p.add_argument("--E", default="all")
    p.add_argument("--D", default="all")
    p.add_argument("--family", help="coefficient family JSON (general form)")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_ineq)

    p = sub.add_parser("witness", help="witness polynomials: spectrum in +-D, value 1 at 0, bounded below by -eps")
    p.add_argument("--search", action="store_true")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--from-seq", dest="from_seq", action="store_true")
    p.add_argument("--set", help="finite set file (one point per line)")
    p.add_argument("--eps", default="0.25")
    p.add_argument("--grid", type=int, default=2048)
    p.add_argument("--family", help="coefficient family JSON")
    p.add_argument("--seq", help="sequence spec (name or JSON)")
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--count", type=int, default=100)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("spectral", help="negative-certificate spectral tests of torus measures along a frequency set")
    p.add_argument("--mode", choices=measures_mod.MODES, required=True)
    p.add_argument("--measure", required=True, help="measure JSON file")
    p.add_argument("--set", help="finite set file")
    p.add_argument("--seq", help="sequence spec (name or JSON)")
    p.add_argument("--M", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-12)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_spectral)

    p = sub.add_parser("divis", help="simultaneous polynomial divisibility by prime powers; explicit appendix-pair construction")
    p.add_argument("--polys", nargs="*", default=[], help="ascending coefficients, e.g. 0,0,1")
    p.add_argument("--upto", type=int, default=100)
    p.add_argument("--q", type=int, help="single modulus instead of a prime-power scan")
    p.add_argument("--construct", nargs=3, metavar=("a", "b", "d"), help="n with d | a*p(n)+b*q(n) for the fixed pair")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_divis)

    p = sub.add_parser("recur", help="recurrence testers (plain/strong/nice/averaging) on closed-form systems; random block orbits")
    p.add_argument("--system", required=True, help="rotation:sqrt2m1 | cyclic:6 | bernoulli:k=3,mass=1/4")
    p.add_argument("--set", required=True, help="interval a:b, members 0,3, or 'cylinder'")
    p.add_argument("--seq", default="squares")
    p.add_argument("--mode", choices=dynamics.MODES, default="plain")
    p.add_argument("--M", type=int, default=100)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--orbit", action="store_true", help="random block orbit instead of exact correlations")
    p.add_argument("--seed", type=int)
    p.add_argument("--N", type=int, default=10**5)
    p.add_argument("--lags", default="1")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_recur)

    p = sub.add_parser("udtest", help="Weyl sums and star discrepancy of alpha * n^degree mod 1")
    p.add_argument("--alpha", default="sqrt2")
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--N", type=int, default=10**4)
    p.add_argument("--kmax", type=int, default=5)
    p.add_argument("--tol", type=float, default=1e-2)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_udtest)

    p = sub.add_parser("seq", help="generate sequence terms from a spec or named shortcut")
    p.add_argument("--spec", required=True, help="name (squares, morse, ...) or JSON")
    p.add_argument("--count", type=int, default=10)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_seq)

    if defaults:
        parser.set_defaults(**defaults)
    return parser


def _load_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def run(argv: list[str]) -> int:
    # pre-scan for --config so its values become parser defaults
    defaults = {}
    if "--config" in argv:
        try:
            cfg_path = argv[argv.index("--config") + 1]
            raw = _load_config(cfg_path)
        except (IndexError, OSError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return EXIT_USAGE
        for key, value in raw.items():
            if key in ("jobs", "M", "N_int", "kmax", "count", "grid", "q"):
                defaults[key] = int(value)
            elif key in ("tol", "eps"):
                defaults[key] = value if key == "eps" else float(value)
            else:
                defaults[key] = value
    parser = build_parser(defaults)
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit_Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except inequalities.ImaginaryDustError as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

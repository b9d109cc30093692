"""``certichan`` command-line interface.

Exit codes: 0 certifiable / success, 1 not certifiable, 2 usage or parse
error, 3 numerical-integrity error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .certify import build_certificate, can_certify, p1_parallel, query_bound
from .errors import (DimensionLimitError, NoCertificateError, NumericalIntegrityError,
                     PreconditionError, ShapeMismatchError, SpecParseError)
from .linalg import MAX_DIM, Tolerance
from .oracle import brute_force_p1, simulate_protocol
from .povm import Permutation, sic_certificate, sic_p1_parallel_bound, sic_povm
from .spec_io import Report, load_spec

EXIT_OK, EXIT_NOT_CERTIFIABLE, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3
SIC_DELTA_ATOL = 1e-9


class UsageError(Exception):
    pass


def _tol(args) -> Tolerance:
    return Tolerance(rel_rank_cut=args.tol)


def _load_family(args):
    null = load_spec(args.null_spec)
    alts = [load_spec(p) for p in args.alt_specs]
    return null, alts


def _verdict(flag: bool) -> str:
    return "certifiable" if flag else "not certifiable"


def cmd_check(args) -> tuple[Report, int]:
    null, alts = _load_family(args)
    ok = can_certify(null.channel, [a.channel for a in alts], _tol(args))
    return Report("check", _verdict(ok)), EXIT_OK if ok else EXIT_NOT_CERTIFIABLE


def _parallel_table(null, alts, max_n, tol):
    rows = []
    for n in range(1, max_n + 1):
        if (null.in_dim * null.out_dim) ** n > MAX_DIM:
            break
        try:
            rows.append((n, p1_parallel(null, alts, n, tol=tol)))
        except DimensionLimitError:
            break
    return rows


def _sic_bound_table(null_spec, alt_specs, max_n):
    if null_spec.kind != "sic" or len(alt_specs) != 1 or alt_specs[0].kind != "sic":
        return []
    if null_spec.d != alt_specs[0].d:
        return []
    # relabeling that carries the null SIC onto the alternative one
    p0, p1 = null_spec.permutation, alt_specs[0].permutation
    inverse = [0] * p0.size
    for i, j in enumerate(p0.mapping):
        inverse[j] = i
    relabel = Permutation(tuple(p1(inverse[i]) for i in range(p0.size)))
    k = relabel.fixed_point_count
    return [(n, sic_p1_parallel_bound(null_spec.d, k, n)) for n in range(1, max_n + 1)]


def cmd_bound(args) -> tuple[Report, int]:
    if not 0 < args.epsilon < 1:
        raise UsageError(f"--epsilon must lie in (0, 1), got {args.epsilon}")
    if args.max_n < 1:
        raise UsageError("--max-n must be positive")
    null, alts = _load_family(args)
    tol = _tol(args)
    alt_channels = [a.channel for a in alts]
    if not can_certify(null.channel, alt_channels, tol):
        return Report("bound", "not certifiable", epsilon=args.epsilon), EXIT_NOT_CERTIFIABLE
    p1 = brute_force_p1(null.channel, alt_channels, args.samples, args.seed, tol)
    qb = query_bound(p1, args.epsilon)
    report = Report(
        "bound", "certifiable", p1_single=p1, epsilon=args.epsilon, n_epsilon=qb.n_epsilon,
        p1_parallel_table=_parallel_table(null.channel, alt_channels, args.max_n, tol),
        bound_table=_sic_bound_table(null, alts, args.max_n),
        details={"seed": args.seed, "samples": args.samples if args.samples is not None else "default"},
    )
    return report, EXIT_OK


def cmd_sic(args) -> tuple[Report, int]:
    if args.d not in (2, 3):
        raise UsageError(f"--d must be 2 or 3, got {args.d}")
    if not 0 < args.epsilon < 1:
        raise UsageError(f"--epsilon must lie in (0, 1), got {args.epsilon}")
    if args.n < 1:
        raise UsageError("--n must be positive")
    sic_povm(args.d)
    try:
        pi = Permutation.parse(args.perm, args.d * args.d)
    except PreconditionError as exc:
        raise UsageError(f"invalid permutation: {exc}") from exc
    k = pi.fixed_point_count
    bounds = [(n, sic_p1_parallel_bound(args.d, k, n)) for n in range(1, args.n + 1)]
    details = {"d": args.d, "permutation": pi.cycle_notation(), "fixed_points": k}
    if k == args.d * args.d:
        details["reason"] = "identical POVMs"
        return Report("sic", "not certifiable", bound_table=bounds, details=details), EXIT_NOT_CERTIFIABLE
    direct = [(n, sic_certificate(args.d, pi, n).p1) for n, _ in bounds]
    deltas = [abs(a[1] - b[1]) for a, b in zip(direct, bounds)]
    details["max_delta"] = f"{max(deltas):.3g}"
    qb = query_bound(bounds[0][1], args.epsilon)
    report = Report("sic", "certifiable", p1_single=bounds[0][1], epsilon=args.epsilon,
                    n_epsilon=qb.n_epsilon, p1_parallel_table=direct, bound_table=bounds,
                    details=details)
    if max(deltas) > SIC_DELTA_ATOL:
        raise NumericalIntegrityError(
            f"direct SIC p1 disagrees with the closed form by {max(deltas):.3g}")
    return report, EXIT_OK


def cmd_simulate(args) -> tuple[Report, int]:
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    null, alts = _load_family(args)
    tol = _tol(args)
    alt_channels = [a.channel for a in alts]
    if not can_certify(null.channel, alt_channels, tol):
        return Report("simulate", "not certifiable"), EXIT_NOT_CERTIFIABLE
    cert = build_certificate(null.channel, alt_channels, tol=tol)
    true_channel = null.channel if args.true == "null" else alt_channels[0]
    sim = simulate_protocol(true_channel, cert, args.trials, args.seed, truth=args.true)
    report = Report("simulate", "certifiable", p1_single=cert.p1, simulation=sim)
    if args.true == "alt":
        if sim.empirical_fn_rate != 0.0:
            raise NumericalIntegrityError(
                f"false negatives observed ({sim.accept_count}) under a p2 = 0 certificate")
        report.details["fn_exact_zero"] = "asserted"
    return report, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-10,
                        help="relative numerical rank cut (default 1e-10)")
    common.add_argument("--quiet", action="store_true", help="print nothing; verdict via exit code")
    common.add_argument("--out", type=Path, help="write the JSON report here")
    common.add_argument("--csv", type=Path, help="write (N, p1, bound) rows here")

    parser = argparse.ArgumentParser(
        prog="certichan",
        description="Certify quantum channels and measurements with zero false-negative error.")
    sub = parser.add_subparsers(dest="command", required=True)

    def family(p):
        p.add_argument("null_spec", help="channel spec file for the null hypothesis")
        p.add_argument("alt_specs", nargs="+", help="channel spec files for the alternatives")

    p = sub.add_parser("check", parents=[common], help="decide certifiability")
    family(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bound", parents=[common], help="p1, query bound and parallel p1 table")
    family(p)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None,
                   help="random input states for the p1 search (default: 10^4 for d=2, 10^3 for d=3)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sic", parents=[common], help="SIC POVM against a relabeled copy")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--perm", default="()", help="relabeling in 1-based cycle notation, e.g. '(1 2)(3 4)'")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.set_defaults(func=cmd_sic)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo run of the protocol")
    family(p)
    p.add_argument("--true", choices=("null", "alt"), default="null",
                   help="which hypothesis is true (alt uses the first alternative)")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, code = args.func(args)
    except FileNotFoundError as exc:
        return _fail(args, f"file not found: {exc}", EXIT_USAGE)
    except SpecParseError as exc:
        return _fail(args, f"parse error: {exc}", EXIT_USAGE)
    except ShapeMismatchError as exc:
        return _fail(args, f"dimension mismatch: {exc}", EXIT_USAGE)
    except UsageError as exc:
        return _fail(args, f"usage error: {exc}", EXIT_USAGE)
    except (PreconditionError, NoCertificateError, DimensionLimitError) as exc:
        return _fail(args, f"invalid input: {exc}", EXIT_USAGE)
    except NumericalIntegrityError as exc:
        return _fail(args, f"numerical integrity error: {exc}", EXIT_NUMERICAL)

    if args.out:
        args.out.write_text(report.to_json() + "\n")
    if args.csv:
        args.csv.write_text(report.to_csv())
    if not args.quiet:
        sys.stdout.write(report.to_text())
    return code


def _fail(args, message: str, code: int) -> int:
    if not args.quiet:
        print(f"certichan: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

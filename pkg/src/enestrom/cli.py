"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (bad profile, infeasible
election, ...), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import asymptotics, comparison, explorer
from .errors import ElectionError
from .method import EpConfig, Reduction, allocate, enumerate_allocations
from .profile import DROOP, HARE, Fixed, UpdatedPerStep, as_rational, parse_profile
from .proportionality import check_all_subsets, fuzz_monotonicity
from .rivals import METHODS
from .serialize import (
    config_tree,
    dumps,
    format_rational,
    rat,
    rival_tree,
    trace_from_tree,
    trace_tree,
)

_SEATS_META = re.compile(r"^\s*#\s*seats\s*:\s*(\d+)\s*$", re.M)


class UsageError(Exception):
    pass


def _rational_arg(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (TypeError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ElectionError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str, seats):
    text = _read(path)
    profile = parse_profile(text)
    if seats is None:
        m = _SEATS_META.search(text)
        if not m:
            raise UsageError("--seats is required (the file has no '# seats:' line)")
        seats = int(m.group(1))
    return profile, seats


def _config(args) -> EpConfig:
    quota = args.quota or "droop"
    reduction = args.reduction
    if quota == "droop":
        rule = DROOP
    elif quota == "hare":
        rule = HARE
    elif quota == "updated":
        rule = UpdatedPerStep()
        reduction = reduction or "simple"
    elif quota.startswith("fixed="):
        try:
            rule = Fixed(as_rational(quota[len("fixed="):]))
        except (TypeError, ValueError, ZeroDivisionError):
            raise UsageError(f"bad fixed quota {quota!r}") from None
    else:
        raise UsageError(f"unknown quota rule {quota!r}")
    return EpConfig(
        quota=rule,
        reduction=Reduction(reduction or "exact"),
        threshold=args.threshold,
        zero_empty=args.zero_empty,
    )


def _seat_line(profile, seats) -> str:
    return " ".join(f"{c.label}={seats[c.id]}" for c in profile.candidates if seats[c.id])


# -- subcommands ------------------------------------------------------------


def cmd_allocate(args, out) -> int:
    profile, n = _load(args.file, args.seats)
    if args.method == "ep":
        trace = allocate(profile, n, _config(args))
        tree = trace_tree(trace)
        print(f"quota: {format_rational(trace.quota)}", file=out)
    else:
        if args.quota or args.reduction or args.threshold or args.zero_empty:
            raise UsageError("--quota/--reduction/--threshold/--zero-empty apply to --method ep only")
        trace = METHODS[args.method](profile, n)
        tree = rival_tree(trace)
    print(f"elected: {' '.join(trace.elected_labels)}", file=out)
    print(f"seats: {_seat_line(profile, trace.seats)}", file=out)
    if args.method == "ep" and trace.status.value != "completed":
        print(f"status: {trace.status.value} at step {trace.status_step}", file=out)
    if args.method == "thiele-elim":
        print(f"eliminated: {' '.join(profile.labels[i] for i in trace.eliminated)}", file=out)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(dumps(tree) + "\n")
    return 0


def cmd_compare(args, out) -> int:
    header = ["method", "Type", "Thm 1", "Thm 2", "Mono"]
    if args.battery:
        rows = comparison.property_grid()
        print(comparison.format_grid(header, [r.cells() for r in rows]), file=out)
        return 0
    if not args.file:
        raise UsageError("compare needs a profile file or --battery")
    profile, n = _load(args.file, args.seats)
    uninominal = all(len(b.approvals) == 1 for b in profile.ballots)
    rows = []
    for res in comparison.profile_comparison(profile, n):
        mark = lambda ok: "-" if ok is None else (comparison.YES if ok else comparison.NO)  # noqa: E731
        kind = "-"
        if uninominal:
            kind = _uninominal_type(profile, n, res["method"])
        rows.append([comparison.METHOD_NAMES[res["method"]], " ".join(res["elected"]), kind,
                     mark(res["thm1"]), mark(res["thm2"])])
    print(comparison.format_grid(["method", "elected", "Type", "Thm 1", "Thm 2"], rows), file=out)
    return 0


def _uninominal_type(profile, n, method) -> str:
    from .rivals import dhondt_allocations, largest_remainders

    votes = [sum((profile.ballots[k].weight for k in profile.supporters(i)), Fraction(0))
             for i in range(len(profile.candidates))]
    seats = comparison.run_method(method, profile, n).seats
    tags = []
    if seats in largest_remainders(votes, n, DROOP.value(profile.total_votes, n)):
        tags.append("Dr")
    if seats in dhondt_allocations(votes, n):
        tags.append("D'H")
    return "/".join(tags) or "-"


def _check_report(profile, n, trace, method, subsets_max) -> dict:
    reports = check_all_subsets(profile, n, trace, max_candidates=subsets_max)
    report = {
        "method": method,
        "n": n,
        "elected": trace.elected_labels,
        "violations": [r.as_dict() for r in reports],
        "quota_threshold_holds": not any(r.theorem == "quota" for r in reports),
        "closure_threshold_holds": not any(r.theorem == "closure" for r in reports),
    }
    if method == "ep":
        report["config"] = config_tree(trace.config)
        report["quota"] = rat(trace.quota)
    return report


def cmd_check(args, out) -> int:
    text = _read(args.file)
    if text.lstrip().startswith("{"):
        try:
            tree = json.loads(text)
            trace = trace_from_tree(tree)
        except (ValueError, KeyError, TypeError) as exc:
            raise ElectionError(f"{args.file}: not a readable trace ({exc})") from None
        profile, n, method = trace.profile, trace.n, "ep"
        if args.seats is not None and args.seats != n:
            raise UsageError(f"trace is for {n} seats, not {args.seats}")
    else:
        profile, n = _load(args.file, args.seats)
        method = args.method
        trace = allocate(profile, n, _config(args)) if method == "ep" else METHODS[method](profile, n)
    report = _check_report(profile, n, trace, method, args.subsets_max)
    if args.fuzz:
        config = trace.config if method == "ep" else None
        res = fuzz_monotonicity(args.fuzz, seed=args.seed, method=method, config=config)
        report["monotonicity_fuzz"] = {
            "seed": res["seed"],
            "trials": res["trials"],
            "skipped": res["skipped"],
            "violations": [
                {"profile": p.to_text(), "n": k, "candidate": rep.candidate,
                 "delta": [[i, lab, str(w)] for i, lab, w in d]}
                for p, k, d, rep in res["violations"]
            ],
        }
    print(json.dumps(report, indent=2, ensure_ascii=False), file=out)
    return 0


def cmd_sweep(args, out) -> int:
    profile, n = _load(args.file, args.seats)
    lo = args.q_from if args.q_from is not None else profile.total_votes / n / args.samples
    hi = args.q_to if args.q_to is not None else profile.total_votes / n
    samples = explorer.sweep(profile, n, lo, hi, args.samples)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            explorer.write_sweep_csv(samples, fh)
    else:
        explorer.write_sweep_csv(samples, out)
    if args.find:
        res = explorer.find_divisor_quota(profile, n, lo, hi)
        dest = out if args.csv else sys.stderr
        if res.found:
            for a, b, label in res.intervals:
                print(f"valid q in [{format_rational(a)}, {format_rational(b)}]: {label}", file=dest)
            print(f"supremum: {format_rational(res.supremum)}", file=dest)
        else:
            print(f"no divisor-valid quota; smallest gap {format_rational(res.min_gap)}", file=dest)
    return 0


def cmd_two_party(args, out) -> int:
    if args.curve:
        if args.zeta is None:
            raise UsageError("--curve needs --zeta")
        if args.staircase:
            rows = asymptotics.staircase_curve(args.zeta, args.samples, args.probe_n)
        else:
            rows = asymptotics.limit_curve(args.zeta, args.samples)
        if args.csv:
            asymptotics.write_curve_csv(rows, args.csv, args.exact)
        else:
            out.write(asymptotics.curve_csv_text(rows))
        return 0
    if None in (args.va, args.vb, args.vab, args.seats):
        raise UsageError("two-party needs --va, --vb, --vab and --seats (or --curve)")
    res = asymptotics.simulate_two_party(args.va, args.vb, args.vab, args.seats)
    print(f"seats: A={res.seats_A} B={res.seats_B}", file=out)
    print(f"recipients: {res.recipients}", file=out)
    print(f"first crossing: {res.first_crossing}", file=out)
    print(f"predicted k: {res.predicted_k}", file=out)
    if res.exact_limit is not None:
        print(f"limit n_A/n: {format_rational(res.exact_limit)}", file=out)
    print(f"n_A/n: {format_rational(res.simulated_fraction)}", file=out)
    return 0


def cmd_enumerate(args, out) -> int:
    if args.cap < 1:
        raise UsageError("--cap must be at least 1")
    profile, n = _load(args.file, args.seats)
    outcomes = enumerate_allocations(profile, n, _config(args), branch_cap=args.cap)
    for o in outcomes:
        seq = " ".join(profile.labels[i] for i in o.sequence)
        print(f"{seq}  |  {_seat_line(profile, o.seats)}", file=out)
    print(f"{len(outcomes)} distinct allocation(s)", file=out)
    return 0


# -- parser -----------------------------------------------------------------


def _add_config_flags(p):
    p.add_argument("--quota", help="droop, hare, updated or fixed=<q>")
    p.add_argument("--reduction", choices=[r.value for r in Reduction])
    p.add_argument("--threshold", type=_rational_arg, default=Fraction(0))
    p.add_argument("--zero-empty", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="enestrom", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    methods = ["ep", *METHODS]

    p = sub.add_parser("allocate", help="run one method on a profile")
    p.add_argument("file")
    p.add_argument("--seats", type=int)
    p.add_argument("--method", choices=methods, default="ep")
    _add_config_flags(p)
    p.add_argument("--trace", metavar="OUT.json")
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("compare", help="all methods side by side, or the property grid")
    p.add_argument("file", nargs="?")
    p.add_argument("--seats", type=int)
    p.add_argument("--battery", action="store_true", help="property grid over the bundled fixtures")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("check", help="threshold checks and monotonicity fuzzing (JSON)")
    p.add_argument("file", help="profile file or trace JSON from 'allocate --trace'")
    p.add_argument("--seats", type=int)
    p.add_argument("--method", choices=methods, default="ep")
    _add_config_flags(p)
    p.add_argument("--subsets-max", type=int, default=12)
    p.add_argument("--fuzz", type=int, default=0, metavar="N")
    p.add_argument("--seed", type=int, default=comparison.DEFAULT_SEED)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="fixed-quota sweep as CSV")
    p.add_argument("file")
    p.add_argument("--seats", type=int)
    p.add_argument("--from", dest="q_from", type=_rational_arg)
    p.add_argument("--to", dest="q_to", type=_rational_arg)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--csv", metavar="OUT.csv")
    p.add_argument("--find", action="store_true", help="also search for divisor-valid quotas")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("two-party", help="two-party recursion or limit curves")
    p.add_argument("--va", type=_rational_arg)
    p.add_argument("--vb", type=_rational_arg)
    p.add_argument("--vab", type=_rational_arg)
    p.add_argument("--seats", type=int)
    p.add_argument("--curve", action="store_true")
    p.add_argument("--zeta", type=_rational_arg)
    p.add_argument("--samples", type=int, default=99)
    p.add_argument("--staircase", action="store_true")
    p.add_argument("--probe-n", type=int, default=200)
    p.add_argument("--csv", metavar="OUT.csv")
    p.add_argument("--exact", metavar="OUT.csv", help="sidecar CSV with exact p/q values")
    p.set_defaults(func=cmd_two_party)

    p = sub.add_parser("enumerate", help="every allocation reachable through ties")
    p.add_argument("file")
    p.add_argument("--seats", type=int)
    _add_config_flags(p)
    p.add_argument("--cap", type=int, default=256)
    p.set_defaults(func=cmd_enumerate)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"enestrom {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ElectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

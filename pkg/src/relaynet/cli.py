"""Command-line front end.

Rates are given positionally in flow order A1B1 B1A1 A2B2 B2A2 ... as
integers or exact fractions ``p/d``.  Exit status: 0 success, 1 a semantic
negative (outside the region, invalid network, failed verification), 2 a
usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from relaynet import network, region
from relaynet.forwarding import (
    NotAchievableError,
    ScheduleFormatError,
    dumps_schedule,
    loads_schedule,
    schedule_halfduplex,
    schedule_integral,
    schedule_rational,
)
from relaynet.network import HalfDuplex, NetworkFileError, NetworkSpec, flows, parse_fraction
from relaynet.oracle import check_schedule
from relaynet.simulator import DEFAULT_SEED, random_messages, run, verify, verify_detail
from relaynet.sweep import all_networks, sweep


class UsageError(Exception):
    pass


def _fmt(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _rates(tokens: list[str], spec: NetworkSpec) -> tuple[Fraction, ...]:
    try:
        rates = tuple(parse_fraction(t) for t in tokens)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if len(rates) != 2 * spec.M:
        raise UsageError(f"expected {2 * spec.M} rates ({' '.join(map(str, flows(spec.M)))}), got {len(rates)}")
    return rates


def _load(path: str) -> NetworkSpec:
    try:
        return network.load(path)
    except (OSError, NetworkFileError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _load_valid(path: str) -> NetworkSpec:
    spec = _load(path)
    report = network.validate(spec)
    if not report.ok:
        raise UsageError(f"{path}: invalid network: " + "; ".join(report.problems))
    return spec


def _region(spec: NetworkSpec) -> region.Region:
    return region.halfduplex_region(spec) if spec.is_half else region.constraints(spec)


def cmd_validate(args) -> int:
    spec = _load(args.network)
    report = network.validate(spec)
    if args.porcelain:
        print(f"valid={'true' if report.ok else 'false'}")
        for p in report.problems:
            print(f"problem={p}")
    else:
        print("VALID" if report.ok else "INVALID")
        for p in report.problems:
            print(f"  {p}")
    return 0 if report.ok else 1


def cmd_region(args) -> int:
    spec = _load_valid(args.network)
    cons = _region(spec).constraints
    if args.porcelain:
        for c in cons:
            print(f"constraint={'+'.join(map(str, c.flows))}<={_fmt(c.rhs)}")
    else:
        width = max(len("+".join(map(str, c.flows))) for c in cons)
        for c in cons:
            print(f"{'+'.join(map(str, c.flows)):<{width}} <= {_fmt(c.rhs)}")
    return 0


def cmd_vertices(args) -> int:
    spec = _load_valid(args.network)
    if spec.is_half:
        t = spec.mode.t
        scaled = network.expand(spec, t.numerator, t.denominator - t.numerator)
        verts = sorted(tuple(v / t.denominator for v in x) for x in region.vertices(scaled))
    else:
        verts = region.vertices(spec)
    for v in verts:
        text = (",".join if args.porcelain else " ".join)(_fmt(x) for x in v)
        print(f"vertex={text}" if args.porcelain else text)
    return 0


def cmd_check(args) -> int:
    spec = _load_valid(args.network)
    rates = _rates(args.rates, spec)
    violated = _region(spec).first_violation(rates)
    if args.porcelain:
        print(f"inside={'true' if violated is None else 'false'}")
        if violated:
            print(f"violated={violated}")
    else:
        print("INSIDE" if violated is None else f"OUTSIDE ({violated})")
    return 0 if violated is None else 1


def cmd_schedule(args) -> int:
    spec = _load_valid(args.network)
    rates = _rates(args.rates, spec)
    try:
        if spec.is_half:
            s = schedule_halfduplex(spec, rates)
        elif all(r.denominator == 1 for r in rates):
            s = schedule_integral(spec, rates)
        else:
            s = schedule_rational(spec, rates)
    except NotAchievableError as exc:
        print(f"OUTSIDE: {exc}", file=sys.stderr)
        return 1
    if check_schedule(spec, s) or not verify(spec, s):
        print("internal error: schedule failed verification; not printed", file=sys.stderr)
        return 1
    sys.stdout.write(dumps_schedule(s))
    return 0


def cmd_simulate(args) -> int:
    spec = _load_valid(args.network)
    try:
        s = loads_schedule(Path(args.schedule).read_text(), spec)
    except (OSError, ScheduleFormatError, ValueError) as exc:
        raise UsageError(f"{args.schedule}: {exc}") from None
    problems = check_schedule(spec, s)
    if problems:
        print("INVALID schedule: " + "; ".join(problems), file=sys.stderr)
        return 1
    seed = DEFAULT_SEED if args.seed is None else args.seed
    if args.exhaustive:
        detail = verify_detail(spec, s, seed)
        kind = "exhaustive" if detail.exhaustive else f"sampled seed={seed}"
        print(f"PATTERNS {detail.patterns} {kind} {'OK' if detail.ok else 'FAIL'}")
        if detail.first_failure is not None:
            sys.stdout.write(run(spec, s, detail.first_failure).dumps())
        return 0 if detail.ok else 1
    report = run(spec, s, random_messages(spec, s, seed))
    report.seed = seed
    sys.stdout.write(report.dumps())
    return 0 if report.ok else 1


def cmd_sweep(args) -> int:
    if args.pairs < 1 or args.max_gain < 0:
        raise UsageError("--pairs must be >= 1 and --max-gain >= 0")
    mode = None
    if args.mode == "half":
        try:
            mode = HalfDuplex(parse_fraction(args.t))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if not 0 < mode.t < 1:
            raise UsageError("--t must lie strictly between 0 and 1")
    result = sweep(all_networks(args.pairs, args.max_gain, mode), grouping=args.grouping, jobs=args.jobs)
    if args.porcelain:
        print(f"networks={result.networks}\ntuples={result.tuples}\nfailures={len(result.failures)}")
    else:
        print(f"networks  {result.networks}\ntuples    {result.tuples}\nfailures  {len(result.failures)}")
    for line in result.failures:
        print(f"FAIL {line}", file=sys.stderr)
    return 0 if result.ok else 1


def cmd_best_t(args) -> int:
    spec = _load_valid(args.network)
    weights = _rates(args.weights, spec)
    try:
        t, value = region.best_t(spec, weights, args.denom)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.porcelain:
        print(f"t={_fmt(t)}\nvalue={_fmt(value)}")
    else:
        print(f"t      {_fmt(t)}\nvalue  {_fmt(value)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaynet",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--porcelain", action="store_true", help="machine-readable key=value output")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, network_file=True):
        p = sub.add_parser(name, help=help_)
        if network_file:
            p.add_argument("-n", "--network", required=True, help="network description file")
        p.add_argument("--porcelain", action="store_true", default=argparse.SUPPRESS)
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check a network file")
    add("region", cmd_region, "list the cut-set inequalities")
    add("vertices", cmd_vertices, "list the exact vertices of the region")
    p = add("check", cmd_check, "test whether a rate tuple is inside the region")
    p.add_argument("-r", "--rates", nargs="+", required=True, help="rates A1B1 B1A1 A2B2 B2A2 ...")
    p = add("schedule", cmd_schedule, "build and verify an equation-forwarding schedule")
    p.add_argument("-r", "--rates", nargs="+", required=True, help="rates A1B1 B1A1 A2B2 B2A2 ...")
    p = add("simulate", cmd_simulate, "run a schedule file through the channel")
    p.add_argument("-s", "--schedule", required=True, help="schedule file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--seed", type=int, help="seed for the random message pattern")
    g.add_argument("--exhaustive", action="store_true", help="check all patterns (sampled above 16 bits)")
    p = add("sweep", cmd_sweep, "schedule and verify every in-region integral tuple of every network", False)
    p.add_argument("--pairs", type=int, required=True)
    p.add_argument("--max-gain", type=int, required=True)
    p.add_argument("--mode", choices=("full", "half"), default="full")
    p.add_argument("--t", default="1/2", help="listen fraction for --mode half")
    p.add_argument("--grouping", action="store_true", help="also check the canonical grouped form")
    p.add_argument("--jobs", type=int, default=1)
    p = add("best-t", cmd_best_t, "optimise the half-duplex listen fraction")
    p.add_argument("-w", "--weights", nargs="+", required=True, help="weights in flow order")
    p.add_argument("--denom", type=int, required=True, help="largest denominator of t to try")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"relaynet: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

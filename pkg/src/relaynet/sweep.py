"""Exhaustive achievability sweeps: schedule, check and simulate every in-region point."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from relaynet.forwarding import canonicalize, schedule_halfduplex, schedule_integral
from relaynet.network import HalfDuplex, NetworkSpec, expand
from relaynet.oracle import check_schedule, grouping_problems
from relaynet.region import integral_points
from relaynet.simulator import verify


@dataclass
class SweepResult:
    networks: int = 0
    tuples: int = 0
    failures: list[str] = field(default_factory=list)

    def merge(self, other: "SweepResult") -> None:
        self.networks += other.networks
        self.tuples += other.tuples
        self.failures.extend(other.failures)

    @property
    def ok(self) -> bool:
        return not self.failures


def all_networks(M: int, max_gain: int, mode=None) -> Iterator[NetworkSpec]:
    """Every network with ``M`` pairs and gains in ``0..max_gain``."""
    for g in itertools.product(range(max_gain + 1), repeat=4 * M):
        rows = [g[4 * i: 4 * i + 4] for i in range(M)]
        yield NetworkSpec.from_pairs(rows, mode)


def check_network(spec: NetworkSpec, grouping: bool = False) -> SweepResult:
    """Schedule and verify every integral in-region tuple (or ``k/d`` tuple in half duplex)."""
    res = SweepResult(networks=1)
    if isinstance(spec.mode, HalfDuplex):
        t = spec.mode.t
        d = t.denominator
        scaled = expand(spec, t.numerator, d - t.numerator)
        points = [tuple(Fraction(v, d) for v in r) for r in integral_points(scaled)]
        build = schedule_halfduplex
    else:
        points = list(integral_points(spec))
        build = schedule_integral
    for r in points:
        res.tuples += 1
        try:
            s = build(spec, r)
        except Exception as exc:  # noqa: BLE001 - every failure is reported
            res.failures.append(f"{spec.rows()} r={r}: {type(exc).__name__}: {exc}")
            continue
        problems = check_schedule(spec, s)
        if problems:
            res.failures.append(f"{spec.rows()} r={r}: invalid schedule: {problems}")
        elif not verify(spec, s):
            res.failures.append(f"{spec.rows()} r={r}: simulation failed")
        elif grouping and not isinstance(spec.mode, HalfDuplex):
            c = canonicalize(s)
            bad = check_schedule(spec, c) + grouping_problems(c)
            if bad or c.rates != s.rates or not verify(spec, c):
                res.failures.append(f"{spec.rows()} r={r}: canonical form broken: {bad}")
    return res


def _check_rows(args) -> SweepResult:
    rows, mode, grouping = args
    return check_network(NetworkSpec.from_pairs(rows, mode), grouping)


def sweep(networks: Iterable[NetworkSpec], grouping: bool = False, jobs: int = 1) -> SweepResult:
    total = SweepResult()
    if jobs > 1:
        from multiprocessing import Pool

        work = ((spec.rows(), spec.mode, grouping) for spec in networks)
        with Pool(jobs) as pool:
            for part in pool.imap(_check_rows, work, chunksize=64):
                total.merge(part)
    else:
        for spec in networks:
            total.merge(check_network(spec, grouping))
    return total

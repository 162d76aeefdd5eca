"""Equation-forwarding schedules.

Relay uplink levels are numbered 1 (top) .. q_up (bottom); a source with
uplink gain ``n`` reaches the bottom ``n`` of them.  Downlink levels are
numbered the same way and a destination with gain ``n`` hears the top ``n``.
The relay never recombines equations: each used uplink level is copied to
exactly one downlink level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from relaynet.network import (
    AB,
    BA,
    Flow,
    FullDuplex,
    HalfDuplex,
    ModeError,
    NetworkSpec,
    expand,
    flows,
    halfduplex_factors,
    lcm_denominator,
    require_valid,
)
from relaynet.region import RateTuple, as_rates, constraints, halfduplex_region


class NotAchievableError(ValueError):
    """The requested rate tuple lies outside the cut-set region."""


class SchedulingError(RuntimeError):
    """The inductive construction broke down on an in-region tuple."""


class ScheduleFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Shared:
    """Level carrying ``a_{pair, fwd_bit} + b_{pair, bwd_bit}``."""

    pair: int
    fwd_bit: int = 0
    bwd_bit: int = 0

    @property
    def key(self) -> tuple:
        return ("shared", self.pair)


@dataclass(frozen=True)
class OneWay:
    """Level carrying bit ``bit`` of a single flow."""

    flow: Flow
    bit: int = 0

    @property
    def key(self) -> tuple:
        return ("oneway", self.flow)


Level = Shared | OneWay


@dataclass(frozen=True)
class Schedule:
    """One channel use of an equation-forwarding scheme.

    ``uplink[l-1]`` is what relay uplink level ``l`` carries (None if unused)
    and ``forward[l-1]`` the downlink level it is re-sent on.
    """

    M: int
    uplink: tuple[Level | None, ...]
    forward: tuple[int | None, ...]
    q_down: int
    rates: tuple[int, ...]

    @property
    def q_up(self) -> int:
        return len(self.uplink)

    @property
    def forward_map(self) -> dict[int, int]:
        return {l: d for l, d in enumerate(self.forward, start=1) if d is not None}

    @property
    def achieved(self) -> RateTuple:
        return tuple(Fraction(r) for r in self.rates)


@dataclass(frozen=True)
class TimeExpandedSchedule:
    """A schedule on the network seen over ``Q`` consecutive channel uses.

    The inner schedule lives on the network whose uplink gains are scaled by
    the number of listen slots and downlink gains by the number of transmit
    slots.
    """

    Q: int
    listen: tuple[bool, ...]
    transmit: tuple[bool, ...]
    inner: Schedule
    achieved: RateTuple

    @property
    def up_factor(self) -> int:
        return sum(self.listen)

    @property
    def down_factor(self) -> int:
        return sum(self.transmit)

    @property
    def M(self) -> int:
        return self.inner.M

    @property
    def rates(self) -> tuple[int, ...]:
        return self.inner.rates


def _assemble(M: int, q_up: int, q_down: int, placements) -> Schedule:
    """Build a Schedule from ``(ul, dl, Shared|OneWay)`` triples, numbering bits top-down."""
    uplink: list[Level | None] = [None] * q_up
    forward: list[int | None] = [None] * q_up
    counters = [0] * (2 * M)
    for ul, dl, kind in sorted(placements, key=lambda p: p[0]):
        if isinstance(kind, Shared):
            f, b = Flow(kind.pair, AB).index, Flow(kind.pair, BA).index
            counters[f] += 1
            counters[b] += 1
            uplink[ul - 1] = Shared(kind.pair, counters[f], counters[b])
        else:
            counters[kind.flow.index] += 1
            uplink[ul - 1] = OneWay(kind.flow, counters[kind.flow.index])
        forward[ul - 1] = dl
    return Schedule(M, tuple(uplink), tuple(forward), q_down, tuple(counters))


def _integral(r: Sequence[int | Fraction], M: int) -> list[int]:
    out = []
    for v in as_rates(r, M):
        if v.denominator != 1:
            raise ValueError(f"rate {v} is not an integer")
        out.append(int(v))
    return out


def _remove_levels(net: NetworkSpec, ul: list[int], dl: list[int], lu: int, ld: int):
    """Network with uplink level ``lu`` and downlink level ``ld`` (1-based, local) deleted.

    ``ul``/``dl`` translate local level numbers to the original ones.
    """
    q_u = net.q_up
    up = [[g - (lu > q_u - g) for g in gains] for gains in (net.up_a, net.up_b)]
    down = [[g - (ld <= g) for g in gains] for gains in (net.down_a, net.down_b)]
    reduced = NetworkSpec(tuple(up[0]), tuple(up[1]), tuple(down[0]), tuple(down[1]), FullDuplex())
    ul = ul[: lu - 1] + ul[lu:]
    dl = dl[: ld - 1] + dl[ld:]
    ul = ul[len(ul) - reduced.q_up:] if reduced.q_up else []
    dl = dl[: reduced.q_down]
    return reduced, ul, dl


def schedule_integral(spec: NetworkSpec, r: Sequence[int | Fraction]) -> Schedule:
    """Inductive level assignment for an integral in-region rate tuple.

    While some pair has traffic both ways, its endpoints share the highest
    uplink level they both reach and the lowest downlink level they both
    hear; the two levels are deleted and the induction continues on the
    smaller network.  The remaining one-way flows are stacked: weakest source
    at the bottom of the uplink, weakest destination at the top of the
    downlink.
    """
    require_valid(spec)
    if spec.is_half:
        raise ModeError("schedule_integral() needs a full-duplex network")
    rates = _integral(r, spec.M)
    region = constraints(spec)
    if not region.contains(rates):
        raise NotAchievableError(f"{tuple(rates)} violates {region.first_violation(rates)}")

    net = spec
    ul = list(range(1, spec.q_up + 1))
    dl = list(range(1, spec.q_down + 1))
    placements = []
    while True:
        pair = next((i for i in range(1, spec.M + 1) if rates[2 * i - 2] and rates[2 * i - 1]), None)
        if pair is None:
            break
        lu = net.q_up - min(net.up_a[pair - 1], net.up_b[pair - 1]) + 1
        ld = min(net.down_a[pair - 1], net.down_b[pair - 1])
        if not (1 <= lu <= net.q_up and 1 <= ld <= net.q_down):
            raise SchedulingError(f"pair {pair} has no common level in {net}")
        placements.append((ul[lu - 1], dl[ld - 1], Shared(pair)))
        net, ul, dl = _remove_levels(net, ul, dl, lu, ld)
        rates[2 * pair - 2] -= 1
        rates[2 * pair - 1] -= 1
        if not constraints(net).contains(rates):
            raise SchedulingError(f"reduced tuple {tuple(rates)} left the region of the reduced network {net}")

    active = [f for f in flows(spec.M) if rates[f.index]]
    up_levels: dict[Flow, list[int]] = {f: [] for f in active}
    level = net.q_up
    for f in sorted(active, key=lambda f: (net.source_gain(f), f.pair, f.direction)):
        for _ in range(rates[f.index]):
            if level < net.q_up - net.source_gain(f) + 1:
                raise SchedulingError(f"uplink stacking ran out of levels for {f}")
            up_levels[f].append(ul[level - 1])
            level -= 1
    down_levels: dict[Flow, list[int]] = {f: [] for f in active}
    level = 1
    for f in sorted(active, key=lambda f: (net.dest_gain(f), f.pair, f.direction)):
        for _ in range(rates[f.index]):
            if level > net.dest_gain(f):
                raise SchedulingError(f"downlink stacking ran out of levels for {f}")
            down_levels[f].append(dl[level - 1])
            level += 1
    for f in active:
        for u, d in zip(sorted(up_levels[f]), sorted(down_levels[f])):
            placements.append((u, d, OneWay(f)))
    return _assemble(spec.M, spec.q_up, spec.q_down, placements)


def schedule_rational(spec: NetworkSpec, r: Sequence[int | Fraction]) -> TimeExpandedSchedule:
    """Schedule a rational in-region tuple over ``Q = lcm(denominators)`` channel uses."""
    require_valid(spec)
    if spec.is_half:
        raise ModeError("schedule_rational() needs a full-duplex network; use schedule_halfduplex()")
    rates = as_rates(r, spec.M)
    region = constraints(spec)
    if not region.contains(rates):
        raise NotAchievableError(f"{rates} violates {region.first_violation(rates)}")
    Q = lcm_denominator(rates)
    inner = schedule_integral(expand(spec, Q, Q), [v * Q for v in rates])
    return TimeExpandedSchedule(Q, (True,) * Q, (True,) * Q, inner, rates)


def schedule_halfduplex(spec: NetworkSpec, r: Sequence[int | Fraction]) -> TimeExpandedSchedule:
    """Schedule for a relay that listens for the first ``Qt`` slots and transmits for the rest."""
    require_valid(spec)
    if not isinstance(spec.mode, HalfDuplex):
        raise ModeError("schedule_halfduplex() needs a half-duplex network")
    rates = as_rates(r, spec.M)
    region = halfduplex_region(spec)
    if not region.contains(rates):
        raise NotAchievableError(f"{rates} violates {region.first_violation(rates)}")
    t = spec.mode.t
    Q = math.lcm(t.denominator, lcm_denominator(rates))
    n_listen, n_transmit = halfduplex_factors(t, Q)
    inner = schedule_integral(expand(spec, n_listen, n_transmit), [v * Q for v in rates])
    listen = (True,) * n_listen + (False,) * n_transmit
    return TimeExpandedSchedule(Q, listen, tuple(not x for x in listen), inner, rates)


def _type_order(key: tuple) -> tuple:
    kind, who = key
    if kind == "shared":
        return (who, 0, "")
    return (who.pair, 1, who.direction)


def canonicalize(s: Schedule) -> Schedule:
    """Rearrange a valid schedule so every equation type occupies contiguous levels.

    Leftover one-way levels in opposite directions of a pair are first merged
    into shared levels, so pair ``i`` ends with ``min(R_AB, R_BA)`` shared
    levels and ``|R_AB - R_BA|`` one-way levels.  Each type is then packed
    into one block, the most constrained type nearest the edge it needs
    (bottom of the uplink, top of the downlink).
    """
    fmap = s.forward_map
    groups: dict[tuple, list[tuple[int, int]]] = {}
    for l, level in enumerate(s.uplink, start=1):
        if level is not None:
            groups.setdefault(level.key, []).append((l, fmap[l]))

    for pair in range(1, s.M + 1):
        fwd = sorted(groups.pop(("oneway", Flow(pair, AB)), []))
        bwd = sorted(groups.pop(("oneway", Flow(pair, BA)), []))
        k = min(len(fwd), len(bwd))
        # levels below a reachable uplink level stay reachable; levels above a
        # heard downlink level stay heard
        merged = [(max(u1, u2), min(d1, d2)) for (u1, d1), (u2, d2) in zip(fwd[:k], bwd[:k])]
        if merged:
            groups.setdefault(("shared", pair), []).extend(merged)
        if fwd[k:]:
            groups[("oneway", Flow(pair, AB))] = fwd[k:]
        if bwd[k:]:
            groups[("oneway", Flow(pair, BA))] = bwd[k:]

    ul_block: dict[tuple, list[int]] = {}
    level = s.q_up
    for key in sorted(groups, key=lambda k: (-min(u for u, _ in groups[k]), _type_order(k))):
        n = len(groups[key])
        ul_block[key] = list(range(level - n + 1, level + 1))
        level -= n
    dl_block: dict[tuple, list[int]] = {}
    level = 1
    for key in sorted(groups, key=lambda k: (max(d for _, d in groups[k]), _type_order(k))):
        n = len(groups[key])
        dl_block[key] = list(range(level, level + n))
        level += n

    placements = []
    for key in groups:
        kind = Shared(key[1]) if key[0] == "shared" else OneWay(key[1])
        placements.extend((u, d, kind) for u, d in zip(ul_block[key], dl_block[key]))
    return _assemble(s.M, s.q_up, s.q_down, placements)


# --- text serialisation ---------------------------------------------------


def dumps_schedule(s: Schedule | TimeExpandedSchedule) -> str:
    """``rates ... Q ...`` header, one ``UL`` line per uplink level, one ``FWD`` line per mapping."""
    Q = s.Q if isinstance(s, TimeExpandedSchedule) else 1
    inner = s.inner if isinstance(s, TimeExpandedSchedule) else s
    out = ["rates " + " ".join(map(str, inner.rates)) + f" Q {Q}"]
    for l, level in enumerate(inner.uplink, start=1):
        if level is None:
            out.append(f"UL {l} unused")
        elif isinstance(level, Shared):
            out.append(f"UL {l} shared {level.pair}")
        else:
            out.append(f"UL {l} oneway {level.flow.pair} {level.flow.source}")
    for l, d in inner.forward_map.items():
        out.append(f"FWD {l} -> {d}")
    return "\n".join(out) + "\n"


def loads_schedule(text: str, spec: NetworkSpec) -> TimeExpandedSchedule:
    """Parse a serialised schedule for ``spec``; bit indices are renumbered top-down."""
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0][0] != "rates" or len(lines[0]) != 2 * spec.M + 3 or lines[0][-2] != "Q":
        raise ScheduleFormatError(f"expected header 'rates <{2 * spec.M} integers> Q <Q>'")
    try:
        rates = [int(v) for v in lines[0][1:-2]]
        Q = int(lines[0][-1])
    except ValueError:
        raise ScheduleFormatError("non-integer value in header") from None
    if Q < 1:
        raise ScheduleFormatError("Q must be positive")
    if isinstance(spec.mode, HalfDuplex):
        n_listen, n_transmit = halfduplex_factors(spec.mode.t, Q)
        listen = (True,) * n_listen + (False,) * n_transmit
        transmit = tuple(not x for x in listen)
    else:
        n_listen = n_transmit = Q
        listen = transmit = (True,) * Q
    q_up, q_down = spec.q_up * n_listen, spec.q_down * n_transmit

    kinds: dict[int, Level] = {}
    fwd: dict[int, int] = {}
    try:
        for tok in lines[1:]:
            if tok[0] == "UL" and len(tok) >= 3:
                l = int(tok[1])
                if tok[2] == "shared" and len(tok) == 4:
                    kinds[l] = Shared(int(tok[3]))
                elif tok[2] == "oneway" and len(tok) == 5 and tok[4] in ("A", "B"):
                    kinds[l] = OneWay(Flow(int(tok[3]), AB if tok[4] == "A" else BA))
                elif tok[2] != "unused" or len(tok) != 3:
                    raise ScheduleFormatError(f"bad UL line: {' '.join(tok)}")
            elif tok[0] == "FWD" and len(tok) == 4 and tok[2] == "->":
                fwd[int(tok[1])] = int(tok[3])
            else:
                raise ScheduleFormatError(f"unrecognised line: {' '.join(tok)}")
    except ValueError as exc:
        if isinstance(exc, ScheduleFormatError):
            raise
        raise ScheduleFormatError(str(exc)) from None
    if set(kinds) != set(fwd):
        raise ScheduleFormatError("every used UL level needs exactly one FWD line")
    if any(not 1 <= l <= q_up for l in kinds):
        raise ScheduleFormatError(f"UL level out of range 1..{q_up}")
    inner = _assemble(spec.M, q_up, q_down, [(l, fwd[l], k) for l, k in kinds.items()])
    if list(inner.rates) != rates:
        raise ScheduleFormatError(f"header rates {rates} disagree with levels {list(inner.rates)}")
    achieved = tuple(Fraction(v, Q) for v in rates)
    return TimeExpandedSchedule(Q, listen, transmit, inner, achieved)

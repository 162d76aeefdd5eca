"""Independent checks on schedules.

Nothing here calls the constructive scheduler.  ``check_schedule`` re-derives
every validity condition straight from the gains, ``brute_force_schedule``
searches the whole class of level-permutation schemes, and
``grouping_problems`` tests the contiguous-groups property.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from relaynet.forwarding import OneWay, Schedule, Shared, TimeExpandedSchedule
from relaynet.network import AB, BA, Flow, HalfDuplex, NetworkSpec, expand


class InstanceTooLargeError(ValueError):
    pass


BRUTE_FORCE_MAX_LEVELS = 5


def _up_reach(gain: int, q_up: int, level: int) -> bool:
    return level >= q_up - gain + 1


def _down_reach(gain: int, level: int) -> bool:
    return level <= gain


def check_schedule(spec: NetworkSpec, s: Schedule | TimeExpandedSchedule) -> list[str]:
    """Every reason ``s`` is not a valid schedule for ``spec`` (empty if valid)."""
    if isinstance(s, TimeExpandedSchedule):
        problems = []
        if len(s.listen) != s.Q or len(s.transmit) != s.Q:
            problems.append("slot role lists do not have Q entries")
        if isinstance(spec.mode, HalfDuplex):
            if any(a == b for a, b in zip(s.listen, s.transmit)):
                problems.append("half-duplex slot both listens and transmits (or neither)")
            if Fraction(s.up_factor, s.Q) != spec.mode.t:
                problems.append(f"{s.up_factor} of {s.Q} slots listen, expected t={spec.mode.t}")
        elif not (all(s.listen) and all(s.transmit)):
            problems.append("full-duplex slots must all listen and transmit")
        if [Fraction(v, s.Q) for v in s.inner.rates] != list(s.achieved):
            problems.append("achieved rates are not inner rates divided by Q")
        if problems or s.up_factor == 0 or s.down_factor == 0:
            return problems or ["no listen or no transmit slot"]
        return problems + check_schedule(expand(spec, s.up_factor, s.down_factor), s.inner)

    if isinstance(spec.mode, HalfDuplex):
        return ["a single-use schedule needs a full-duplex network"]
    M = len(spec.up_a)
    up = {"A": spec.up_a, "B": spec.up_b}
    down = {"A": spec.down_a, "B": spec.down_b}
    q_up = max(list(spec.up_a) + list(spec.up_b), default=0)
    q_down = max(list(spec.down_a) + list(spec.down_b), default=0)
    problems = []
    if s.M != M:
        problems.append(f"schedule is for {s.M} pairs, network has {M}")
        return problems
    if len(s.uplink) != q_up or len(s.forward) != q_up:
        problems.append(f"uplink has {len(s.uplink)} levels, expected {q_up}")
        return problems
    if s.q_down != q_down:
        problems.append(f"downlink has {s.q_down} levels, expected {q_down}")

    bits: dict[tuple[int, str], list[int]] = {(i, d): [] for i in range(1, M + 1) for d in (AB, BA)}
    used_dl: dict[int, int] = {}
    for l, (level, d) in enumerate(zip(s.uplink, s.forward), start=1):
        if level is None:
            if d is not None:
                problems.append(f"unused uplink level {l} is forwarded")
            continue
        if isinstance(level, Shared):
            i = level.pair
            if not 1 <= i <= M:
                problems.append(f"level {l}: bad pair {i}")
                continue
            sources, dests = ("A", "B"), ("A", "B")
            bits[(i, AB)].append(level.fwd_bit)
            bits[(i, BA)].append(level.bwd_bit)
        elif isinstance(level, OneWay):
            i, direction = level.flow.pair, level.flow.direction
            if not 1 <= i <= M or direction not in (AB, BA):
                problems.append(f"level {l}: bad flow {level.flow}")
                continue
            sources, dests = (direction[0],), (direction[1],)
            bits[(i, direction)].append(level.bit)
        else:
            problems.append(f"level {l}: unknown entry {level!r}")
            continue
        for node in sources:
            if not _up_reach(up[node][i - 1], q_up, l):
                problems.append(f"uplink level {l} is out of reach of {node}{i}")
        if d is None:
            problems.append(f"used uplink level {l} has no downlink image")
            continue
        if not 1 <= d <= q_down:
            problems.append(f"uplink level {l} forwarded to nonexistent downlink level {d}")
            continue
        if d in used_dl:
            problems.append(f"downlink level {d} used by uplink levels {used_dl[d]} and {l}")
        used_dl[d] = l
        for node in dests:
            if not _down_reach(down[node][i - 1], d):
                problems.append(f"downlink level {d} is not heard by {node}{i}")

    for (i, direction), got in bits.items():
        idx = 2 * (i - 1) + (0 if direction == AB else 1)
        if sorted(got) != list(range(1, len(got) + 1)):
            problems.append(f"flow {direction[0]}{i}{direction[1]}{i}: bit indices {sorted(got)} not 1..{len(got)}")
        if len(s.rates) != 2 * M:
            continue
        if s.rates[idx] != len(got):
            problems.append(f"flow {direction[0]}{i}{direction[1]}{i}: claims {s.rates[idx]} bits, carries {len(got)}")
    if len(s.rates) != 2 * M:
        problems.append("rate tuple has the wrong dimension")
    return problems


def brute_force_schedule(spec: NetworkSpec, r) -> Schedule | None:
    """Exhaustive search over all equation-forwarding schedules achieving ``r``.

    Levels of the same type are interchangeable, so the downlink search runs
    over type labels and each type's uplink and downlink levels are then
    paired in order.
    """
    M = len(spec.up_a)
    q_up = max(list(spec.up_a) + list(spec.up_b), default=0)
    q_down = max(list(spec.down_a) + list(spec.down_b), default=0)
    if q_up > BRUTE_FORCE_MAX_LEVELS or q_down > BRUTE_FORCE_MAX_LEVELS:
        raise InstanceTooLargeError(f"brute force is limited to {BRUTE_FORCE_MAX_LEVELS} levels per direction")
    target = [Fraction(v) for v in r]
    if len(target) != 2 * M:
        raise ValueError("rate tuple has the wrong dimension")
    if any(v.denominator != 1 or v < 0 for v in target):
        return None
    target = [int(v) for v in target]

    # type t: ("shared", i) or ("oneway", i, direction)
    types = [("shared", i) for i in range(1, M + 1)]
    types += [("oneway", i, d) for i in range(1, M + 1) for d in (AB, BA)]

    def sources(t):
        return ("A", "B") if t[0] == "shared" else (t[2][0],)

    def dests(t):
        return ("A", "B") if t[0] == "shared" else (t[2][1],)

    up = {"A": spec.up_a, "B": spec.up_b}
    down = {"A": spec.down_a, "B": spec.down_b}
    ul_ok = {t: [all(_up_reach(up[n][t[1] - 1], q_up, l) for n in sources(t)) for l in range(1, q_up + 1)] for t in types}
    dl_ok = {t: [all(_down_reach(down[n][t[1] - 1], d) for n in dests(t)) for d in range(1, q_down + 1)] for t in types}

    def served(counts):
        got = [0] * (2 * M)
        for t, c in zip(types, counts):
            if t[0] == "shared":
                got[2 * t[1] - 2] += c
                got[2 * t[1] - 1] += c
            else:
                got[2 * t[1] - 2 + (t[2] == BA)] += c
        return got

    @lru_cache(maxsize=None)
    def downlink(level: int, remaining: tuple[int, ...]):
        if not any(remaining):
            return ()
        if level > q_down or sum(remaining) > q_down - level + 1:
            return None
        for k, t in enumerate(types):
            if remaining[k] and dl_ok[t][level - 1]:
                rest = remaining[:k] + (remaining[k] - 1,) + remaining[k + 1:]
                tail = downlink(level + 1, rest)
                if tail is not None:
                    return ((level, k),) + tail
        return downlink(level + 1, remaining)

    labels: list[int | None] = [None] * q_up

    def uplink(level: int, counts: list[int]):
        got = served(counts)
        if any(g > want for g, want in zip(got, target)):
            return None
        need = sum(max(target[2 * i] - got[2 * i], target[2 * i + 1] - got[2 * i + 1]) for i in range(M))
        if need > q_up - level + 1:
            return None
        if level > q_up:
            if got != target:
                return None
            dl = downlink(1, tuple(counts))
            return None if dl is None else dl
        for k, t in enumerate(types):
            if ul_ok[t][level - 1]:
                counts[k] += 1
                labels[level - 1] = k
                found = uplink(level + 1, counts)
                counts[k] -= 1
                if found is not None:
                    return found
        labels[level - 1] = None
        return uplink(level + 1, counts)

    dl = uplink(1, [0] * len(types))
    if dl is None:
        return None

    dl_of_type: dict[int, list[int]] = {}
    for d, k in dl:
        dl_of_type.setdefault(k, []).append(d)
    uplink_levels: list = [None] * q_up
    forward: list = [None] * q_up
    counter = [0] * (2 * M)
    for l, k in enumerate(labels, start=1):
        if k is None:
            continue
        t = types[k]
        forward[l - 1] = dl_of_type[k].pop(0)
        if t[0] == "shared":
            counter[2 * t[1] - 2] += 1
            counter[2 * t[1] - 1] += 1
            uplink_levels[l - 1] = Shared(t[1], counter[2 * t[1] - 2], counter[2 * t[1] - 1])
        else:
            j = 2 * t[1] - 2 + (t[2] == BA)
            counter[j] += 1
            uplink_levels[l - 1] = OneWay(Flow(t[1], t[2]), counter[j])
    return Schedule(M, tuple(uplink_levels), tuple(forward), q_down, tuple(counter))


def grouping_problems(s: Schedule) -> list[str]:
    """Violations of the contiguous-groups layout with the expected group sizes."""
    problems = []
    ul_levels: dict[tuple, list[int]] = {}
    dl_levels: dict[tuple, list[int]] = {}
    for l, (level, d) in enumerate(zip(s.uplink, s.forward), start=1):
        if level is None:
            continue
        key = ("shared", level.pair) if isinstance(level, Shared) else ("oneway", level.flow)
        ul_levels.setdefault(key, []).append(l)
        dl_levels.setdefault(key, []).append(d)
    for key in ul_levels:
        for name, levels in (("uplink", sorted(ul_levels[key])), ("downlink", sorted(dl_levels[key]))):
            if levels != list(range(levels[0], levels[0] + len(levels))):
                problems.append(f"{key}: {name} levels {levels} are not contiguous")
    for i in range(1, s.M + 1):
        fwd, bwd = s.rates[2 * i - 2], s.rates[2 * i - 1]
        want = {
            ("shared", i): min(fwd, bwd),
            ("oneway", Flow(i, AB)): max(fwd - bwd, 0),
            ("oneway", Flow(i, BA)): max(bwd - fwd, 0),
        }
        for key, n in want.items():
            if len(ul_levels.get(key, [])) != n:
                problems.append(f"{key}: {len(ul_levels.get(key, []))} levels, expected {n}")
    return problems

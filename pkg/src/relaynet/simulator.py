"""Bit-exact end-to-end execution of a schedule over the shift channel.

A time-expanded schedule is run literally, one channel use per slot.  Level
``L`` of the expanded uplink (with ``k`` listen slots) is relay level
``(L - 1) // k + 1`` of listen slot ``(L - 1) % k``; with this interleaving a
source of gain ``n`` reaches the bottom ``k * n`` expanded levels, exactly as
in the scaled network.  The downlink is interleaved the same way over the
transmit slots.  The relay buffers everything it hears before transmitting.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from relaynet.core import receive, zeros
from relaynet.forwarding import OneWay, Schedule, Shared, TimeExpandedSchedule
from relaynet.network import AB, BA, Flow, NetworkSpec, flows
from relaynet.oracle import check_schedule

DEFAULT_SEED = 0x5EED_2009_0001
"""Seed for numpy's PCG64 generator when patterns are sampled."""

EXHAUSTIVE_MAX_BITS = 16
RANDOM_PATTERNS = 10_000


class InvalidScheduleError(ValueError):
    pass


@dataclass
class DecodingReport:
    relay_received: list[np.ndarray]
    relay_transmitted: list[np.ndarray]
    sent: dict[Flow, tuple[int, ...]]
    recovered: dict[Flow, tuple[int, ...]]
    seed: int | None = None

    @property
    def success(self) -> dict[Flow, bool]:
        return {f: self.sent[f] == self.recovered[f] for f in self.sent}

    @property
    def ok(self) -> bool:
        return all(self.success.values())

    def dumps(self) -> str:
        out = []
        if self.seed is not None:
            out.append(f"SEED {self.seed}")
        out += ["YR " + _bits(y) for y in self.relay_received]
        out += ["XR " + _bits(x) for x in self.relay_transmitted]
        for f in self.sent:
            arrow = "A->B" if f.direction == AB else "B->A"
            status = "OK" if self.success[f] else "FAIL"
            out.append(f"FLOW {f.pair} {arrow} sent {_bits(self.sent[f])} got {_bits(self.recovered[f])} {status}")
        return "\n".join(out) + "\n"


def _bits(v) -> str:
    return "".join(str(int(b)) for b in v) or "-"


@dataclass
class _Run:
    relay_received: list[np.ndarray] = field(default_factory=list)
    relay_transmitted: list[np.ndarray] = field(default_factory=list)
    recovered: dict[Flow, np.ndarray] = field(default_factory=dict)


def _as_expanded(s: Schedule | TimeExpandedSchedule) -> tuple[Schedule, int, int]:
    if isinstance(s, TimeExpandedSchedule):
        return s.inner, s.up_factor, s.down_factor
    return s, 1, 1


def _simulate(spec: NetworkSpec, s: Schedule | TimeExpandedSchedule, msgs: dict[Flow, np.ndarray]) -> _Run:
    """Run a batch of message patterns; ``msgs[f]`` has shape ``(P, rate_f)``."""
    inner, n_listen, n_transmit = _as_expanded(s)
    P = next(iter(msgs.values())).shape[0] if msgs else 1
    q_u, q_d = spec.q_up, spec.q_down
    nodes = [(i, x) for i in range(1, spec.M + 1) for x in "AB"]

    def own_bits(node, level):
        """(flow, bit) pairs a node puts on an uplink level."""
        i, x = node
        if isinstance(level, Shared) and level.pair == i:
            return [(Flow(i, AB), level.fwd_bit)] if x == "A" else [(Flow(i, BA), level.bwd_bit)]
        if isinstance(level, OneWay) and level.flow.pair == i and level.flow.source == x:
            return [(level.flow, level.bit)]
        return []

    run = _Run()
    heard = np.zeros((P, n_listen * q_u), dtype=np.uint8)
    for slot in range(n_listen):
        tx = {node: zeros(q_u, (P,)) for node in nodes}
        for L, level in enumerate(inner.uplink, start=1):
            if level is None or (L - 1) % n_listen != slot:
                continue
            pos = (L - 1) // n_listen + 1
            for node in nodes:
                n = spec.up_gain(*node)
                for flow, bit in own_bits(node, level):
                    j = pos - (q_u - n)
                    if j >= 1:
                        tx[node][:, j - 1] = msgs[flow][:, bit - 1]
        y = receive(tx, {node: spec.up_gain(*node) for node in nodes}, q_u)
        run.relay_received.append(y)
        heard[:, slot::n_listen] = y

    sent_dl = np.zeros((P, n_transmit * q_d), dtype=np.uint8)
    for L, D in enumerate(inner.forward, start=1):
        if D is not None:
            sent_dl[:, D - 1] = heard[:, L - 1]

    got = {node: [] for node in nodes}
    for slot in range(n_transmit):
        x_r = np.ascontiguousarray(sent_dl[:, slot::n_transmit])
        run.relay_transmitted.append(x_r)
        for node in nodes:
            got[node].append(receive({"R": x_r}, {"R": spec.down_gain(*node)}, q_d))

    recovered = {f: np.zeros((P, inner.rates[f.index]), dtype=np.uint8) for f in flows(spec.M)}

    def observe(node, D):
        n = spec.down_gain(*node)
        slot, pos = (D - 1) % n_transmit, (D - 1) // n_transmit + 1
        if pos > n:
            return np.zeros(P, dtype=np.uint8)
        return got[node][slot][:, pos + q_d - n - 1]

    for level, D in zip(inner.uplink, inner.forward):
        if level is None or D is None:
            continue
        if isinstance(level, Shared):
            i = level.pair
            fwd, bwd = Flow(i, AB), Flow(i, BA)
            recovered[bwd][:, level.bwd_bit - 1] = observe((i, "A"), D) ^ msgs[fwd][:, level.fwd_bit - 1]
            recovered[fwd][:, level.fwd_bit - 1] = observe((i, "B"), D) ^ msgs[bwd][:, level.bwd_bit - 1]
        else:
            f = level.flow
            recovered[f][:, level.bit - 1] = observe((f.pair, f.dest), D)
    run.recovered = recovered
    return run


def run(
    spec: NetworkSpec,
    s: Schedule | TimeExpandedSchedule,
    messages: dict[Flow, tuple[int, ...] | list[int]],
    check: bool = True,
) -> DecodingReport:
    """Simulate one message pattern and report what every node decoded."""
    if check:
        problems = check_schedule(spec, s)
        if problems:
            raise InvalidScheduleError("; ".join(problems))
    rates = _as_expanded(s)[0].rates
    msgs = {}
    for f in flows(spec.M):
        bits = tuple(int(b) for b in messages.get(f, ()))
        if len(bits) != rates[f.index] or any(b not in (0, 1) for b in bits):
            raise ValueError(f"flow {f} needs {rates[f.index]} bits, got {bits}")
        msgs[f] = np.array([bits], dtype=np.uint8).reshape(1, len(bits))
    result = _simulate(spec, s, msgs)
    return DecodingReport(
        relay_received=[y[0] for y in result.relay_received],
        relay_transmitted=[x[0] for x in result.relay_transmitted],
        sent={f: tuple(int(b) for b in msgs[f][0]) for f in msgs},
        recovered={f: tuple(int(b) for b in result.recovered[f][0]) for f in msgs},
    )


def random_messages(spec: NetworkSpec, s: Schedule | TimeExpandedSchedule, seed: int = DEFAULT_SEED):
    rng = np.random.default_rng(seed)
    rates = _as_expanded(s)[0].rates
    return {f: tuple(int(b) for b in rng.integers(0, 2, rates[f.index])) for f in flows(spec.M)}


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    patterns: int
    exhaustive: bool
    seed: int | None
    first_failure: dict[Flow, tuple[int, ...]] | None = None


def patterns(total_bits: int, seed: int = DEFAULT_SEED) -> tuple[np.ndarray, bool]:
    """All ``2**total_bits`` patterns when small enough, else a seeded sample."""
    if total_bits <= EXHAUSTIVE_MAX_BITS:
        grid = np.array(list(itertools.product((0, 1), repeat=total_bits)), dtype=np.uint8)
        return grid.reshape(2**total_bits, total_bits), True
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, (RANDOM_PATTERNS, total_bits), dtype=np.uint8), False


def verify_detail(spec: NetworkSpec, s: Schedule | TimeExpandedSchedule, seed: int = DEFAULT_SEED) -> VerifyResult:
    inner = _as_expanded(s)[0]
    if inner.M != spec.M or len(inner.rates) != 2 * spec.M or len(inner.forward) != inner.q_up:
        return VerifyResult(False, 0, True, None)
    if inner.q_up != spec.q_up * _as_expanded(s)[1] or inner.q_down != spec.q_down * _as_expanded(s)[2]:
        return VerifyResult(False, 0, True, None)
    total = sum(inner.rates)
    grid, exhaustive = patterns(total, seed)
    msgs, col = {}, 0
    for f in flows(spec.M):
        msgs[f] = grid[:, col: col + inner.rates[f.index]]
        col += inner.rates[f.index]
    try:
        result = _simulate(spec, s, msgs)
    except (IndexError, KeyError, ValueError):
        return VerifyResult(False, len(grid), exhaustive, None if exhaustive else seed)
    bad = np.zeros(len(grid), dtype=bool)
    for f in msgs:
        bad |= (result.recovered[f] != msgs[f]).any(axis=1)
    failure = None
    if bad.any():
        p = int(np.argmax(bad))
        failure = {f: tuple(int(b) for b in msgs[f][p]) for f in msgs}
    return VerifyResult(not bad.any(), len(grid), exhaustive, None if exhaustive else seed, failure)


def verify(spec: NetworkSpec, s: Schedule | TimeExpandedSchedule, seed: int = DEFAULT_SEED) -> bool:
    """True iff every tested message pattern is decoded correctly by every node."""
    return verify_detail(spec, s, seed).ok

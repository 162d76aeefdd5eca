"""Network instances: M user pairs around one relay, with duplex mode."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence


class InvalidNetworkError(ValueError):
    pass


class ModeError(ValueError):
    """Operation called with the wrong duplex mode."""


class NetworkFileError(ValueError):
    pass


@dataclass(frozen=True)
class FullDuplex:
    def __str__(self) -> str:
        return "full"


@dataclass(frozen=True)
class HalfDuplex:
    """The relay listens a fixed fraction ``t`` of the time and transmits the rest."""

    t: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", Fraction(self.t))

    def __str__(self) -> str:
        return f"half {self.t.numerator}/{self.t.denominator}"


DuplexMode = FullDuplex | HalfDuplex

AB, BA = "AB", "BA"


@dataclass(frozen=True, order=True)
class Flow:
    """One direction of session ``pair`` (1-based); ``direction`` is ``"AB"`` or ``"BA"``."""

    pair: int
    direction: str

    @property
    def index(self) -> int:
        """Position of this flow in a rate tuple."""
        return 2 * (self.pair - 1) + (0 if self.direction == AB else 1)

    @property
    def reverse(self) -> "Flow":
        return Flow(self.pair, BA if self.direction == AB else AB)

    @property
    def source(self) -> str:
        return self.direction[0]

    @property
    def dest(self) -> str:
        return self.direction[1]

    def __str__(self) -> str:
        s, d = self.direction
        return f"{s}{self.pair}{d}{self.pair}"


def flows(M: int) -> list[Flow]:
    """All 2M flows in rate-tuple order (A1B1, B1A1, A2B2, ...)."""
    return [Flow(i, d) for i in range(1, M + 1) for d in (AB, BA)]


@dataclass(frozen=True)
class NetworkSpec:
    """Gains of an M-pair two-way relay network.

    ``up_a[i]`` is the gain A_{i+1} -> R, ``down_a[i]`` the gain R -> A_{i+1},
    and likewise for B.  Construction does not validate; use :func:`validate`.
    """

    up_a: tuple[int, ...]
    up_b: tuple[int, ...]
    down_a: tuple[int, ...]
    down_b: tuple[int, ...]
    mode: DuplexMode = field(default_factory=FullDuplex)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]], mode: DuplexMode | None = None) -> "NetworkSpec":
        """Build from rows ``(n_AiR, n_BiR, n_RAi, n_RBi)``."""
        rows = [tuple(r) for r in pairs]
        cols = list(zip(*rows)) if rows else [(), (), (), ()]
        return cls(*(tuple(c) for c in cols), mode=mode if mode is not None else FullDuplex())

    @property
    def M(self) -> int:
        return len(self.up_a)

    @property
    def is_half(self) -> bool:
        return isinstance(self.mode, HalfDuplex)

    @property
    def uplink(self) -> tuple[int, ...]:
        return tuple(g for pair in zip(self.up_a, self.up_b) for g in pair)

    @property
    def downlink(self) -> tuple[int, ...]:
        return tuple(g for pair in zip(self.down_a, self.down_b) for g in pair)

    @property
    def q_up(self) -> int:
        return max(self.uplink, default=0)

    @property
    def q_down(self) -> int:
        return max(self.downlink, default=0)

    def up_gain(self, pair: int, node: str) -> int:
        return (self.up_a if node == "A" else self.up_b)[pair - 1]

    def down_gain(self, pair: int, node: str) -> int:
        return (self.down_a if node == "A" else self.down_b)[pair - 1]

    def source_gain(self, f: Flow) -> int:
        return self.up_gain(f.pair, f.source)

    def dest_gain(self, f: Flow) -> int:
        return self.down_gain(f.pair, f.dest)

    def rows(self) -> list[tuple[int, int, int, int]]:
        return list(zip(self.up_a, self.up_b, self.down_a, self.down_b))

    def full_duplex(self) -> "NetworkSpec":
        """Same gains with the mode set to full duplex."""
        return replace(self, mode=FullDuplex())


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok


def validate(spec: NetworkSpec) -> ValidationReport:
    problems = []
    if spec.M < 1:
        problems.append("pair count: M must be at least 1")
    lengths = {len(spec.up_a), len(spec.up_b), len(spec.down_a), len(spec.down_b)}
    if len(lengths) > 1:
        problems.append("pair count: gain lists have different lengths")
    for name in ("up_a", "up_b", "down_a", "down_b"):
        for i, g in enumerate(getattr(spec, name), start=1):
            if not isinstance(g, int) or isinstance(g, bool):
                problems.append(f"non-integer gain: {name}[{i}] = {g!r}")
            elif g < 0:
                problems.append(f"negative gain: {name}[{i}] = {g}")
    if isinstance(spec.mode, HalfDuplex):
        t = spec.mode.t
        if not 0 < t < 1:
            problems.append(f"listen fraction: t = {t} must lie strictly between 0 and 1")
    elif not isinstance(spec.mode, FullDuplex):
        problems.append(f"mode: unknown duplex mode {spec.mode!r}")
    return ValidationReport(tuple(problems))


def require_valid(spec: NetworkSpec) -> None:
    report = validate(spec)
    if not report.ok:
        raise InvalidNetworkError("; ".join(report.problems))


def expand(spec: NetworkSpec, q_up: int, q_down: int) -> NetworkSpec:
    """Full-duplex network with uplink gains times ``q_up`` and downlink times ``q_down``.

    ``q_up`` channel uses of the relay's listen phase behave like one use of
    the scaled uplink, and likewise for the transmit phase.
    """
    require_valid(spec)
    if q_up < 1 or q_down < 1:
        raise ValueError(f"expansion factors must be positive, got {q_up}, {q_down}")
    return NetworkSpec(
        tuple(g * q_up for g in spec.up_a),
        tuple(g * q_up for g in spec.up_b),
        tuple(g * q_down for g in spec.down_a),
        tuple(g * q_down for g in spec.down_b),
        mode=FullDuplex(),
    )


def halfduplex_factors(t: Fraction, Q: int) -> tuple[int, int]:
    """Listen and transmit slot counts ``(Qt, (1-t)Q)`` for ``Q`` slots."""
    listen = t * Q
    if listen.denominator != 1:
        raise ValueError(f"Q={Q} does not make Qt integral for t={t}")
    return int(listen), Q - int(listen)


def lcm_denominator(values: Iterable[Fraction]) -> int:
    return math.lcm(1, *(Fraction(v).denominator for v in values))


# --- network file format -------------------------------------------------

_GAINS = re.compile(r"^gains\s+(\S+)\s+up\s+(\S+)\s+(\S+)\s+down\s+(\S+)\s+(\S+)$")


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise NetworkFileError(f"line {lineno}: expected an integer, got {token!r}") from None


def parse_fraction(token: str) -> Fraction:
    """Parse ``p/d`` or an integer exactly.  Decimal strings are rejected."""
    if not re.fullmatch(r"-?\d+(/\d+)?", token.strip()):
        raise ValueError(f"not an exact rational: {token!r}")
    return Fraction(token.strip())


def loads(text: str) -> NetworkSpec:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, " ".join(line.split())))
    if not lines:
        raise NetworkFileError("empty network file")

    lineno, first = lines[0]
    tok = first.split()
    if len(tok) != 2 or tok[0] != "pairs":
        raise NetworkFileError(f"line {lineno}: expected 'pairs <M>'")
    M = _int(tok[1], lineno)
    if M < 0 or len(lines) != M + 2:
        raise NetworkFileError(f"expected {M} gains lines and a mode line after 'pairs {M}'")

    rows: dict[int, tuple[int, int, int, int]] = {}
    for lineno, line in lines[1:-1]:
        m = _GAINS.match(line)
        if not m:
            raise NetworkFileError(f"line {lineno}: expected 'gains <i> up <nA> <nB> down <nA> <nB>'")
        i = _int(m.group(1), lineno)
        if not 1 <= i <= M or i in rows:
            raise NetworkFileError(f"line {lineno}: bad or repeated pair index {i}")
        rows[i] = tuple(_int(m.group(k), lineno) for k in range(2, 6))

    lineno, last = lines[-1]
    tok = last.split()
    if tok == ["mode", "full"]:
        mode: DuplexMode = FullDuplex()
    elif len(tok) == 3 and tok[:2] == ["mode", "half"]:
        try:
            mode = HalfDuplex(parse_fraction(tok[2]))
        except ValueError as exc:
            raise NetworkFileError(f"line {lineno}: {exc}") from None
    else:
        raise NetworkFileError(f"line {lineno}: expected 'mode full' or 'mode half <p>/<d>'")
    return NetworkSpec.from_pairs([rows[i] for i in range(1, M + 1)], mode)


def load(path: str | Path) -> NetworkSpec:
    return loads(Path(path).read_text())


def dumps(spec: NetworkSpec) -> str:
    out = [f"pairs {spec.M}"]
    for i, (ua, ub, da, db) in enumerate(spec.rows(), start=1):
        out.append(f"gains {i} up {ua} {ub} down {da} {db}")
    out.append(f"mode {spec.mode}")
    return "\n".join(out) + "\n"


FIG2 = NetworkSpec.from_pairs([(3, 2, 2, 3), (2, 1, 1, 2)])
"""Two-pair example network with rate point (2, 1, 1, 1) inside its region."""

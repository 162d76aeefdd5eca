"""Cut-set outer bound of the multi-pair two-way relay network.

Every non-empty set of directed flows taking at most one direction per pair
gives one inequality: the flows' rate sum is at most the smaller of the
multiple-access rank into the relay (largest source uplink gain) and the
broadcast rank out of it (largest destination downlink gain).  For two pairs
this is the familiar list of four single-flow and four two-flow bounds.

All arithmetic is exact (``int`` / ``Fraction``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from relaynet._lp import linprog_max
from relaynet.network import (
    AB,
    BA,
    Flow,
    HalfDuplex,
    ModeError,
    NetworkSpec,
    flows,
    require_valid,
)

RateTuple = tuple[Fraction, ...]


def as_rates(values: Sequence[int | Fraction | str], M: int | None = None) -> RateTuple:
    """Exact rate tuple from ints, Fractions or ``"p/d"`` strings."""
    out = []
    for v in values:
        if isinstance(v, float):
            raise TypeError("rates must be exact; got a float")
        out.append(Fraction(v))
    if M is not None and len(out) != 2 * M:
        raise ValueError(f"expected {2 * M} rates for {M} pairs, got {len(out)}")
    return tuple(out)


@dataclass(frozen=True)
class CutConstraint:
    flows: tuple[Flow, ...]
    rhs: Fraction

    def lhs(self, r: Sequence[Fraction]) -> Fraction:
        return sum((r[f.index] for f in self.flows), Fraction(0))

    def holds(self, r: Sequence[Fraction]) -> bool:
        return self.lhs(r) <= self.rhs

    def __str__(self) -> str:
        return "+".join(str(f) for f in self.flows) + f" <= {self.rhs}"


@dataclass(frozen=True)
class Region:
    M: int
    constraints: tuple[CutConstraint, ...]

    @property
    def dim(self) -> int:
        return 2 * self.M

    def first_violation(self, r: Sequence[int | Fraction]) -> str | None:
        """Text of the first failing inequality (non-negativity first), or None."""
        r = as_rates(r)
        if len(r) != self.dim:
            raise ValueError(f"rate tuple has {len(r)} entries, region has dimension {self.dim}")
        for f, v in zip(flows(self.M), r):
            if v < 0:
                return f"{f} >= 0"
        for c in self.constraints:
            if not c.holds(r):
                return str(c)
        return None

    def contains(self, r: Sequence[int | Fraction]) -> bool:
        return self.first_violation(r) is None

    def singleton_bounds(self) -> tuple[Fraction, ...]:
        single = {c.flows[0]: c.rhs for c in self.constraints if len(c.flows) == 1}
        return tuple(single[f] for f in flows(self.M))

    def maximize(self, weights: Sequence[int | Fraction]) -> Fraction:
        """``max weights . r`` over the region, by exact simplex."""
        if len(weights) != self.dim:
            raise ValueError("weight vector has the wrong dimension")
        A = [[1 if f in c.flows else 0 for f in flows(self.M)] for c in self.constraints]
        res = linprog_max(list(weights), A, [c.rhs for c in self.constraints])
        assert res.status == "optimal", res.status
        return res.value


def flow_sets(M: int) -> Iterator[tuple[Flow, ...]]:
    """Flow sets with at most one direction per pair, by size then pair index."""
    for k in range(1, M + 1):
        for pairs in itertools.combinations(range(1, M + 1), k):
            for dirs in itertools.product((AB, BA), repeat=k):
                yield tuple(Flow(i, d) for i, d in zip(pairs, dirs))


def _region(spec: NetworkSpec, up_scale: Fraction, down_scale: Fraction) -> Region:
    cons = []
    for fs in flow_sets(spec.M):
        mac = max(spec.source_gain(f) for f in fs) * up_scale
        bc = max(spec.dest_gain(f) for f in fs) * down_scale
        cons.append(CutConstraint(fs, Fraction(min(mac, bc))))
    return Region(spec.M, tuple(cons))


def constraints(spec: NetworkSpec) -> Region:
    require_valid(spec)
    if spec.is_half:
        raise ModeError("constraints() needs a full-duplex network; use halfduplex_region()")
    return _region(spec, Fraction(1), Fraction(1))


def halfduplex_region(spec: NetworkSpec) -> Region:
    """Region with uplink ranks scaled by ``t`` and downlink ranks by ``1 - t``."""
    require_valid(spec)
    if not isinstance(spec.mode, HalfDuplex):
        raise ModeError("halfduplex_region() needs a half-duplex network")
    t = spec.mode.t
    return _region(spec, t, 1 - t)


def contains(spec: NetworkSpec, r: Sequence[int | Fraction]) -> bool:
    return constraints(spec).contains(r)


def halfduplex_contains(spec: NetworkSpec, r: Sequence[int | Fraction]) -> bool:
    return halfduplex_region(spec).contains(r)


def integral_points(spec: NetworkSpec) -> Iterator[tuple[int, ...]]:
    """Every integer rate tuple inside the region, in lexicographic order."""
    region = constraints(spec)
    bounds = [int(b) for b in region.singleton_bounds()]
    for r in itertools.product(*(range(b + 1) for b in bounds)):
        if region.contains(r):
            yield r


def _solve(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of a square system, or None if singular."""
    n = len(A)
    M = [row[:] + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [v / p for v in M[col]]
        for i in range(n):
            if i != col and M[i][col] != 0:
                k = M[i][col]
                M[i] = [a - k * c for a, c in zip(M[i], M[col])]
    return [M[i][n] for i in range(n)]


def _irredundant(region: Region) -> list[CutConstraint]:
    # a flow set is implied by any superset whose bound is no larger
    keep = []
    for c in region.constraints:
        fs = set(c.flows)
        if not any(set(o.flows) > fs and o.rhs <= c.rhs for o in region.constraints):
            keep.append(c)
    return keep


def _extreme_rays(rows: list[list[int]], dim: int) -> list[tuple[int, ...]]:
    """Extreme rays of ``{y >= 0, row . y >= 0 for each row}`` by double description.

    Starts from the orthant, whose rays are the unit vectors, and adds one
    half-space at a time.  Adjacency uses the combinatorial test: two rays
    are adjacent iff no third ray is tight on every constraint both are.
    """
    rays = [tuple(int(i == k) for i in range(dim)) for k in range(dim)]
    zeros = [frozenset(j for j in range(dim) if j != k) for k in range(dim)]
    for k, row in enumerate(rows, start=dim):
        sign = [sum(a * y for a, y in zip(row, r)) for r in rays]
        pos = [i for i, v in enumerate(sign) if v > 0]
        neg = [i for i, v in enumerate(sign) if v < 0]
        new_rays = [rays[i] for i, v in enumerate(sign) if v >= 0]
        new_zeros = [zeros[i] | {k} if sign[i] == 0 else zeros[i] for i, v in enumerate(sign) if v >= 0]
        for p in pos:
            for m in neg:
                common = zeros[p] & zeros[m]
                if len(common) < dim - 2:
                    continue
                if any(i not in (p, m) and common <= zeros[i] for i in range(len(rays))):
                    continue
                ray = [sign[p] * b - sign[m] * a for a, b in zip(rays[p], rays[m])]
                g = math.gcd(*ray)
                new_rays.append(tuple(v // g for v in ray))
                new_zeros.append(common | {k})
        rays, zeros = new_rays, new_zeros
    return list(dict.fromkeys(rays))


def vertices(spec: NetworkSpec) -> list[RateTuple]:
    """Exact extreme points of ``{r >= 0} ∩ region``, sorted lexicographically.

    The region is homogenised to the cone ``{(s, r) >= 0 : s * rhs - lhs(r) >= 0}``;
    its extreme rays with ``s > 0`` are the vertices scaled by ``s``.
    """
    region = constraints(spec)
    fl = flows(spec.M)
    rows = []
    for c in _irredundant(region):
        row = [c.rhs] + [Fraction(-1 if f in c.flows else 0) for f in fl]
        scale = math.lcm(*(v.denominator for v in row))
        rows.append([int(v * scale) for v in row])
    found = {
        tuple(Fraction(v, ray[0]) for v in ray[1:])
        for ray in _extreme_rays(rows, len(fl) + 1)
        if ray[0] > 0
    }
    return sorted(found)


def vertices_by_enumeration(spec: NetworkSpec) -> list[RateTuple]:
    """Vertices from every ``2M``-subset of bounding hyperplanes; slow, kept as a cross-check."""
    region = constraints(spec)
    fl = flows(spec.M)
    n = len(fl)
    planes = [([Fraction(1 if f in c.flows else 0) for f in fl], c.rhs) for c in _irredundant(region)]
    planes += [([Fraction(-1 if j == k else 0) for j in range(n)], Fraction(0)) for k in range(n)]
    found = set()
    for subset in itertools.combinations(planes, n):
        x = _solve([p[0] for p in subset], [p[1] for p in subset])
        if x is not None and region.contains(x):
            found.add(tuple(x))
    return sorted(found)


def best_t(
    spec: NetworkSpec, weights: Sequence[int | Fraction], denom_bound: int
) -> tuple[Fraction, Fraction]:
    """Listen fraction ``t = p/d`` (``d <= denom_bound``) maximising the weighted sum rate.

    Ties go to the smallest ``d``, then the smallest ``p``.
    """
    if denom_bound < 2:
        raise ValueError("denom_bound must be at least 2")
    weights = as_rates(weights, spec.M)
    if any(w < 0 for w in weights) or not any(weights):
        raise ValueError("weights must be non-negative and not all zero")
    best: tuple[Fraction, Fraction] | None = None
    for d in range(2, denom_bound + 1):
        for p in range(1, d):
            t = Fraction(p, d)
            if t.denominator != d:
                continue
            at_t = NetworkSpec(spec.up_a, spec.up_b, spec.down_a, spec.down_b, HalfDuplex(t))
            value = halfduplex_region(at_t).maximize(weights)
            if best is None or value > best[1]:
                best = (t, value)
    return best

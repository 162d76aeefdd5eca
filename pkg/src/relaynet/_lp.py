"""Two-phase simplex over exact rationals (Bland's rule).

Sized for the handful of variables that appear in rate regions; there is
no attempt at sparse or revised-simplex efficiency.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Number = int | Fraction


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None


def _pivot(T: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    piv = T[row][col]
    T[row] = [v / piv for v in T[row]]
    for i, other in enumerate(T):
        if i != row and other[col]:
            k = other[col]
            T[i] = [a - k * b for a, b in zip(other, T[row])]
    basis[row] = col


def _simplex(T, basis, cost, allowed) -> str:
    while True:
        entering = None
        for j in allowed:
            if j in basis:
                continue
            reduced = cost[j] - sum(cost[b] * T[i][j] for i, b in enumerate(basis))
            if reduced > 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        best = None
        for i, row in enumerate(T):
            if row[entering] > 0:
                ratio = row[-1] / row[entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, basis, best[1], entering)


def linprog_max(
    c: Sequence[Number],
    A_ub: Sequence[Sequence[Number]] = (),
    b_ub: Sequence[Number] = (),
    A_eq: Sequence[Sequence[Number]] = (),
    b_eq: Sequence[Number] = (),
) -> LPResult:
    """Maximise ``c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""
    n = len(c)
    rows = [([Fraction(v) for v in a], "le", Fraction(b)) for a, b in zip(A_ub, b_ub)]
    rows += [([Fraction(v) for v in a], "eq", Fraction(b)) for a, b in zip(A_eq, b_eq)]
    norm = []
    for a, kind, b in rows:
        if len(a) != n:
            raise ValueError("constraint row length does not match objective")
        if b < 0:
            a, b = [-v for v in a], -b
            kind = {"le": "ge", "eq": "eq"}[kind]
        norm.append((a, kind, b))

    n_slack = sum(kind != "eq" for _, kind, _ in norm)
    n_art = sum(kind != "le" for _, kind, _ in norm)
    width = n + n_slack + n_art
    T: list[list[Fraction]] = []
    basis: list[int] = []
    s = n
    art = n + n_slack
    art_cols = []
    for a, kind, b in norm:
        row = a + [Fraction(0)] * (n_slack + n_art) + [b]
        if kind == "le":
            row[s] = Fraction(1)
            basis.append(s)
            s += 1
        else:
            if kind == "ge":
                row[s] = Fraction(-1)
                s += 1
            row[art] = Fraction(1)
            basis.append(art)
            art_cols.append(art)
            art += 1
        T.append(row)

    if art_cols:
        cost1 = [Fraction(0)] * width
        for j in art_cols:
            cost1[j] = Fraction(-1)
        _simplex(T, basis, cost1, range(width))
        if any(T[i][-1] > 0 for i, b in enumerate(basis) if b in art_cols):
            return LPResult("infeasible")
        # drive zero-valued artificials out of the basis, dropping redundant rows
        for i in reversed(range(len(T))):
            if basis[i] in art_cols:
                col = next((j for j in range(n + n_slack) if T[i][j] != 0), None)
                if col is None:
                    del T[i], basis[i]
                else:
                    _pivot(T, basis, i, col)

    cost = [Fraction(v) for v in c] + [Fraction(0)] * (n_slack + n_art)
    status = _simplex(T, basis, cost, range(n + n_slack))
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * width
    for i, b in enumerate(basis):
        x[b] = T[i][-1]
    value = sum((cost[j] * x[j] for j in range(n)), Fraction(0))
    return LPResult("optimal", value, tuple(x[:n]))

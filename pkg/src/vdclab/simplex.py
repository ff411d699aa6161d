"""Dense two-phase simplex over exact rationals.

Small and deterministic.  The entering rule is Dantzig's (most negative
reduced cost) with ties broken by lowest column index, switching to
Bland's rule after an iteration budget so termination is guaranteed;
the leaving rule breaks ratio ties by lowest basis index (Bland).  All
arithmetic is in Fraction, so feasibility answers are exact for the
given data.  Intended for the small witness-search LPs, not as a
general-purpose solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)

#: iterations of Dantzig pivoting before switching to pure Bland
DANTZIG_BUDGET = 2000
#: hard cap; pure Bland terminates long before this on our problem sizes
MAX_ITERATIONS = 200_000


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded" | "stalled"
    x: list[Fraction] | None
    objective: Fraction | None


def _pivot(rows, obj, basis, r, c):
    piv = rows[r][c]
    if piv != 1:
        inv = ONE / piv
        rows[r] = [v * inv for v in rows[r]]
    prow = rows[r]
    for i, row in enumerate(rows):
        if i != r and row[c]:
            f = row[c]
            rows[i] = [v - f * w for v, w in zip(row, prow)]
    if obj[c]:
        f = obj[c]
        obj[:] = [v - f * w for v, w in zip(obj, prow)]
    basis[r] = c


def _rebuild_objective(rows, basis, cost, ncols):
    obj = [Fraction(cost[j]) for j in range(ncols)] + [ZERO]
    for i, b in enumerate(basis):
        f = obj[b]
        if f:
            row = rows[i]
            for j in range(ncols):
                obj[j] -= f * row[j]
            obj[ncols] -= f * row[ncols]
    return obj


def _optimize(rows, basis, cost, ncols) -> str:
    obj = _rebuild_objective(rows, basis, cost, ncols)
    iterations = 0
    while True:
        iterations += 1
        if iterations > MAX_ITERATIONS:
            return "stalled"
        if iterations <= DANTZIG_BUDGET:
            enter = None
            best = ZERO
            for j in range(ncols):
                v = obj[j]
                if v < best:
                    best = v
                    enter = j
        else:
            enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best_ratio = None
        leave = None
        for i, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave is None:
            return "unbounded"
        _pivot(rows, obj, basis, leave, enter)


def solve_lp(
    objective: Sequence[Fraction],
    a_eq: Sequence[Sequence[Fraction]],
    b_eq: Sequence[Fraction],
) -> LPResult:
    """Minimize objective . x subject to a_eq x = b_eq, x >= 0."""
    m = len(a_eq)
    n = len(objective)
    rows: list[list[Fraction]] = []
    for i in range(m):
        row = [Fraction(v) for v in a_eq[i]] + [Fraction(b_eq[i])]
        if row[-1] < 0:
            row = [-v for v in row]
        rows.append(row)
    # phase 1: one artificial per row
    for i in range(m):
        art = [ZERO] * m
        art[i] = ONE
        rows[i] = rows[i][:-1] + art + [rows[i][-1]]
    ncols = n + m
    basis = [n + i for i in range(m)]
    cost1 = [ZERO] * n + [ONE] * m
    status = _optimize(rows, basis, cost1, ncols)
    if status != "optimal":
        return LPResult("stalled" if status == "stalled" else "infeasible", None, None)
    phase1_obj = sum(rows[i][-1] for i in range(m) if basis[i] >= n)
    if phase1_obj > 0:
        return LPResult("infeasible", None, None)
    # drive remaining artificials out of the basis
    drop: list[int] = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if rows[i][j]), None)
            if col is None:
                drop.append(i)  # redundant constraint
            else:
                _pivot(rows, [ZERO] * (ncols + 1), basis, i, col)
    for i in sorted(drop, reverse=True):
        del rows[i]
        del basis[i]
    # phase 2 on the original columns
    rows = [row[:n] + [row[-1]] for row in rows]
    cost2 = [Fraction(v) for v in objective]
    status = _optimize(rows, basis, cost2, n)
    if status != "optimal":
        return LPResult(status, None, None)
    x = [ZERO] * n
    for i, b in enumerate(basis):
        x[b] = rows[i][-1]
    obj = sum(c * v for c, v in zip(cost2, x))
    return LPResult("optimal", x, obj)

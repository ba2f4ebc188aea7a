"""Exact phase-one simplex (Bland's rule) for NNC feasibility.

Only one question is ever asked of the LP layer: does a system of weak and
strict linear inequalities have a rational solution?  It is answered through
the Motzkin transposition theorem, which turns the question into the
feasibility of a small standard-form system with one row per dimension.

The tableau is kept fraction-free: every row is an integer vector scaled by
an arbitrary positive factor, reduced by its gcd after each pivot.  Signs
and ratios are all the simplex needs, and both survive positive scaling.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence


def _reduce(row: list[int]) -> list[int]:
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        return [v // g for v in row]
    return row


def _phase_one(rows: list[list[int]], rhs: list[int], ncols: int) -> bool:
    """Return True iff ``rows @ x == rhs`` has a solution with ``x >= 0``.

    ``rhs`` must be componentwise nonnegative.  Artificial variables are
    appended after the ``ncols`` structural columns.
    """
    nrows = len(rows)
    if nrows == 0:
        return True
    width = ncols + nrows
    last = width  # rhs column
    tab: list[list[int]] = []
    for r, row in enumerate(rows):
        full = list(row) + [0] * nrows + [rhs[r]]
        full[ncols + r] = 1
        tab.append(full)
    basis = [ncols + r for r in range(nrows)]
    # reduced costs of "minimise sum of artificials"; cost[last] = -objective
    cost = [0] * (width + 1)
    for j in list(range(ncols)) + [last]:
        cost[j] = -sum(tab[r][j] for r in range(nrows))

    while cost[last]:
        enter = -1
        for j in range(width):
            if cost[j] < 0:
                enter = j
                break
        if enter < 0:
            return False
        leave = -1
        for r in range(nrows):
            a = tab[r][enter]
            if a > 0:
                if leave < 0:
                    leave = r
                    continue
                lrow = tab[leave]
                lhs = tab[r][last] * lrow[enter]
                rhs_ = lrow[last] * a
                if lhs < rhs_ or (lhs == rhs_ and basis[r] < basis[leave]):
                    leave = r
        if leave < 0:
            # cannot happen in phase one (objective bounded below by 0)
            return False
        prow = tab[leave]
        piv = prow[enter]
        nz = [j for j in range(width + 1) if prow[j]]
        for r in range(nrows):
            if r == leave:
                continue
            row = tab[r]
            f = row[enter]
            if f:
                if piv != 1:
                    row = [v * piv for v in row]
                for j in nz:
                    row[j] -= f * prow[j]
                tab[r] = _reduce(row)
        f = cost[enter]
        if piv != 1:
            cost = [v * piv for v in cost]
        for j in nz:
            cost[j] -= f * prow[j]
        cost = _reduce(cost)
        basis[leave] = enter
    return True


def nnc_feasible(constraints: Sequence[tuple[Sequence[int], int, bool]], dim: int) -> bool:
    """Decide whether ``{v | a.v + k >= 0 (or > 0 when strict)}`` is nonempty.

    Coefficients and constants must be integers.  Infeasibility certificate
    (Motzkin): multipliers ``y >= 0`` and ``y0 >= 0`` with
    ``sum y_i a_i = 0``, ``sum_{strict} y_i + y0 = 1`` and
    ``sum y_i k_i + y0 <= 0``.  The system is empty iff such a certificate
    exists, so we run phase one on the certificate system.
    """
    cons = list(constraints)
    if not cons:
        return True
    # columns: y_0..y_{m-1}, y0, t (slack of the last row)
    ncols = len(cons) + 2
    rows: list[list[int]] = []
    rhs: list[int] = []
    for d in range(dim):
        row = [c[0][d] for c in cons]
        if not any(row):
            continue
        # keep rhs >= 0 (it is 0 here) and normalise the sign for determinism
        rows.append(row + [0, 0])
        rhs.append(0)
    rows.append([1 if c[2] else 0 for c in cons] + [1, 0])
    rhs.append(1)
    rows.append([c[1] for c in cons] + [1, 1])
    rhs.append(0)
    return not _phase_one(rows, rhs, ncols)

"""Linear sum assignment and multiset edit distance."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "AssignmentResult",
    "NonSquare",
    "NegativeEntry",
    "DimensionMismatch",
    "DELETED",
    "lsap_solve",
    "hungarian",
    "pad_for_insert_delete",
    "multiset_edit_distance",
]

DELETED = None


class NonSquare(ValueError):
    pass


class NegativeEntry(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class AssignmentResult:
    row_to_col: tuple
    total_cost: object


def hungarian(cost: Sequence[Sequence]) -> tuple[list[int], object]:
    """Kuhn-Munkres with potentials, O(n^3).

    Works for any ordered numeric type (int, Fraction, float).  Returns the
    column assigned to each row and the total cost.
    """
    n = len(cost)
    if n == 0:
        return [], 0
    zero = cost[0][0] - cost[0][0]
    u = [zero] * (n + 1)
    v = [zero] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [None] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            row = cost[i0 - 1]
            ui = u[i0]
            delta = None
            j1 = 0
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - ui - v[j]
                    if minv[j] is None or cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if delta is None or minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    assign = [0] * n
    for j in range(1, n + 1):
        assign[p[j] - 1] = j - 1
    return assign, sum((cost[i][assign[i]] for i in range(n)), zero)


def _as_integer_matrix(C) -> tuple[list[list[int]], int]:
    frac = [[Fraction(x) for x in row] for row in C]
    den = 1
    for row in frac:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    return [[int(x * den) for x in row] for row in frac], den


def lsap_solve(C: Sequence[Sequence], tie_break: bool = True) -> AssignmentResult:
    """Minimum-cost perfect matching of a square, nonnegative matrix.

    With ``tie_break`` the lexicographically smallest ``row_to_col`` among
    all optimal matchings is returned.  This is done exactly: entries are
    brought to a common integer denominator and each entry ``(i, j)`` gets
    the perturbation ``j * n**(n-1-i)``, scaled below the integer cost
    resolution, so the perturbed optimum is the lexicographic minimum of the
    original optima.
    """
    rows = [list(r) for r in C]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NonSquare(f"cost matrix must be square, got {n} rows of lengths {sorted({len(r) for r in rows})}")
    for r in rows:
        for x in r:
            if x < 0:
                raise NegativeEntry(f"negative cost {x}")
            if isinstance(x, float) and not math.isfinite(x):
                raise NegativeEntry("cost entries must be finite")
    if n == 0:
        return AssignmentResult((), 0)
    if not tie_break:
        assign, total = hungarian(rows)
        return AssignmentResult(tuple(assign), total)

    ints, _ = _as_integer_matrix(rows)
    big = n ** n  # exceeds any total perturbation
    weights = [n ** (n - 1 - i) for i in range(n)]
    perturbed = [[ints[i][j] * big + j * weights[i] for j in range(n)] for i in range(n)]
    assign, _ = hungarian(perturbed)
    total = sum((rows[i][assign[i]] for i in range(n)), rows[0][0] - rows[0][0])
    return AssignmentResult(tuple(assign), total)


def pad_for_insert_delete(C_map, del_costs, ins_costs, inf=None) -> list[list]:
    """Square ``(n+m)`` matrix allowing every row to be deleted and every
    column to be inserted.

    Forbidden slots hold ``inf``, by default the sum of all finite entries
    plus one, so they never appear in an optimal assignment.
    """
    C_map = [list(r) for r in C_map]
    n, m = len(del_costs), len(ins_costs)
    if len(C_map) != n or any(len(r) != m for r in C_map):
        raise DimensionMismatch(f"C_map must be {n}x{m}")
    if inf is None:
        inf = sum(sum(r) for r in C_map) + sum(del_costs) + sum(ins_costs) + 1
    zero = inf - inf
    out = []
    for i in range(n):
        out.append(C_map[i] + [del_costs[i] if t == i else inf for t in range(n)])
    for t in range(m):
        out.append([ins_costs[t] if s == t else inf for s in range(m)] + [zero] * n)
    return out


def multiset_edit_distance(s1: Iterable, s2: Iterable) -> int:
    """max(|S1|, |S2|) - |S1 ∩ S2| for multisets."""
    c1, c2 = Counter(s1), Counter(s2)
    common = sum((c1 & c2).values())
    return max(sum(c1.values()), sum(c2.values())) - common

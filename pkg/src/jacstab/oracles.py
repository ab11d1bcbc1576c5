"""Independent oracles used by the selftest and the test suite.

These deliberately avoid the main code paths they check: the Laplacian solve
is exact Gaussian elimination instead of leaf peeling, the stable-multidegree
search is a dumb box scan over all (not only connected) subcurves, and the
exponential truncation is plain multiply-and-truncate of the formal series.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping

from .errors import JacstabError
from .graphs import DualGraph
from .stability import Polarization, QSTABLE, STABLE, SEMISTABLE, resolve_basepoint


def solve_twister(graph: DualGraph, m: Mapping[str, int], root: str) -> dict[str, int]:
    """Solve L.gamma = m with gamma(root) = 0 by exact Gaussian elimination.

    Requires a connected graph; the reduced Laplacian (root row and column
    removed) is invertible then.  Raises if the exact solution is not integral.
    """
    ids = [v for v in graph.ids if v != root]
    if not ids:
        return {root: 0}
    L: dict[str, dict[str, int]] = {v: {w: 0 for w in graph.ids} for v in graph.ids}
    for (a, b) in graph.edges:
        if a == b:
            continue
        L[a][a] += 1
        L[b][b] += 1
        L[a][b] -= 1
        L[b][a] -= 1
    size = len(ids)
    rows = [[Fraction(L[v][w]) for w in ids] + [Fraction(m[v])] for v in ids]
    for col in range(size):
        pivot = next(r for r in range(col, size) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        pv = rows[col][col]
        rows[col] = [x / pv for x in rows[col]]
        for r in range(size):
            if r != col and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    gamma = {root: 0}
    for i, v in enumerate(ids):
        value = rows[i][size]
        if value.denominator != 1:
            raise JacstabError("NO_INTEGER_SOLUTION",
                               f"gamma({v}) = {value} is not an integer")
        gamma[v] = int(value)
    # the dropped root equation holds automatically (rows of L sum to zero and
    # m sums to zero), but verify anyway
    for v in graph.ids:
        lhs = sum(L[v][w] * gamma[w] for w in graph.ids)
        if lhs != m[v]:
            raise JacstabError("NO_INTEGER_SOLUTION", "system is inconsistent")
    return gamma


def _subset_profiles(graph: DualGraph, pol: Polarization, mode: str,
                     base: str | None) -> list[tuple[tuple[int, ...], Fraction, bool]]:
    """All proper subcurve inequalities, recomputed from the definition.

    Singletons come first so that a failing candidate dies early.
    """
    index = {v: i for i, v in enumerate(graph.ids)}
    profiles = []
    for Y in graph.proper_subsets():
        bound = pol.q_value(graph, Y) - Fraction(graph.kappa(Y), 2)
        if mode == STABLE:
            strict = True
        elif mode == QSTABLE:
            strict = base in Y
        else:
            strict = False
        profiles.append((tuple(index[v] for v in Y), bound, strict))
    profiles.sort(key=lambda p: len(p[0]))
    return profiles


def brute_force_stable(graph: DualGraph, pol: Polarization, mode: str = QSTABLE,
                       basepoint: str | None = None,
                       half_width: int | None = None) -> list[dict[str, int]]:
    """Scan the box prod_v [-g-#edges, g+#edges] for stable multidegrees.

    Feasibility pruning uses only the running total (pure arithmetic); every
    surviving vector is tested against all proper subcurves directly.
    """
    target = pol.target_degree(graph)
    ids = graph.ids
    if len(ids) == 1:
        return [{ids[0]: target}]
    base = resolve_basepoint(graph, basepoint) if mode == QSTABLE else None
    profiles = _subset_profiles(graph, pol, mode, base)
    width = half_width if half_width is not None else graph.g + len(graph.edges)
    lo, hi = -width, width
    results: list[dict[str, int]] = []
    stack = [0] * len(ids)

    def passes() -> bool:
        for members, bound, strict in profiles:
            deg = sum(stack[i] for i in members)
            if deg < bound or (strict and deg == bound):
                return False
        return True

    def search(i: int, acc: int) -> None:
        remaining = len(ids) - i
        if i == len(ids):
            if acc == target and passes():
                results.append({ids[j]: stack[j] for j in range(len(ids))})
            return
        for d in range(lo, hi + 1):
            rest = remaining - 1
            if acc + d + rest * lo <= target <= acc + d + rest * hi:
                stack[i] = d
                search(i + 1, acc + d)

    search(0, 0)
    results.sort(key=lambda m: tuple(m[v] for v in ids))
    return results


def exp_series_degree_part(g: int) -> dict[tuple[tuple[int, int], ...], Fraction]:
    """Degree-g part of exp(sum (-1)^s (s-1)! C_s) by series multiplication.

    Works with truncated polynomials keyed by atom multiplicity tuples; this
    is the brute-force route against which the closed truncation is checked.
    """
    def degree(key) -> int:
        return sum(s * m for s, m in key)

    def mul(p, q):
        out: dict = {}
        for k1, c1 in p.items():
            for k2, c2 in q.items():
                if degree(k1) + degree(k2) > g:
                    continue
                merged: dict[int, int] = dict(k1)
                for s, m in k2:
                    merged[s] = merged.get(s, 0) + m
                key = tuple(sorted(merged.items()))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return {k: c for k, c in out.items() if c}

    x = {(): Fraction(0)}
    for s in range(1, g + 1):
        x[((s, 1),)] = Fraction((-1) ** s * math.factorial(s - 1))
    x.pop((), None)

    total: dict = {(): Fraction(1)}
    power = {(): Fraction(1)}
    for j in range(1, g + 1):
        power = mul(power, x)
        inv = Fraction(1, math.factorial(j))
        for k, c in power.items():
            total[k] = total.get(k, Fraction(0)) + inv * c
    return {k: c for k, c in total.items() if degree(k) == g and c}

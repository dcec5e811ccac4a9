"""Brute-force reference implementations.

These deliberately avoid numpy and the optimised code paths so they can be
used to cross-check them: plain loops, exact fractions, full enumeration.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Sequence


def brute_positive_count(rows: Sequence[Sequence[int]], decision: Sequence[int], attrs: Sequence[int]) -> int:
    """Count objects whose attrs-tuple never co-occurs with another decision."""
    n = len(rows)
    count = 0
    for i in range(n):
        key = tuple(rows[i][a] for a in attrs)
        if all(
            decision[j] == decision[i]
            for j in range(n)
            if tuple(rows[j][a] for a in attrs) == key
        ):
            count += 1
    return count


def brute_gamma(rows, decision, attrs) -> Fraction:
    n = len(rows)
    return Fraction(brute_positive_count(rows, decision, attrs), n) if n else Fraction(0)


def table_rows(table) -> tuple[list[list[int]], list[int]]:
    return table.cells.tolist(), table.decision.tolist()


def gamma_of(table, attrs) -> Fraction:
    rows, dec = table_rows(table)
    return brute_gamma(rows, dec, list(attrs))


def is_reduct(table, subset) -> bool:
    """Both reduct clauses re-checked from scratch."""
    rows, dec = table_rows(table)
    full = brute_gamma(rows, dec, list(range(len(rows[0]) if rows else 0)))
    subset = sorted(subset)
    g = brute_gamma(rows, dec, subset)
    if g != full:
        return False
    return all(brute_gamma(rows, dec, [b for b in subset if b != a]) != g for a in subset)


def all_reducts(table) -> list[frozenset[int]]:
    na = table.n_attributes
    return [
        frozenset(c)
        for size in range(na + 1)
        for c in itertools.combinations(range(na), size)
        if is_reduct(table, c)
    ]


def pearson_textbook(x: Sequence[float], y: Sequence[float]) -> float:
    n = len(x)
    sx, sy = sum(x), sum(y)
    sxy = sum(a * b for a, b in zip(x, y))
    sxx = sum(a * a for a in x)
    syy = sum(b * b for b in y)
    num = n * sxy - sx * sy
    den = math.sqrt(n * sxx - sx * sx) * math.sqrt(n * syy - sy * sy)
    return 0.0 if den == 0 else num / den


def naive_acv(matrix: Sequence[Sequence[float]]) -> tuple[float, float]:
    """Row and column mean-absolute-correlation terms by double loops."""
    rows = [list(map(float, r)) for r in matrix]
    cols = [list(c) for c in zip(*rows)]

    def term(vectors):
        k = len(vectors)
        total = 0.0
        for i in range(k):
            for j in range(k):
                if i != j:
                    total += abs(pearson_textbook(vectors[i], vectors[j]))
        return total / (k * k - k)

    return term(rows), term(cols)


def _sse(part: Sequence[float]) -> float:
    mean = sum(part) / len(part)
    return sum((v - mean) ** 2 for v in part)


def best_contiguous_sse(values: Sequence[float], bins: int) -> float:
    """Minimum within-cluster SSE over all splits of the sorted values into
    ``min(bins, #distinct)`` non-empty contiguous groups."""
    v = sorted(float(x) for x in values)
    k = min(bins, len(set(v)))
    n = len(v)
    best = math.inf
    for cuts in itertools.combinations(range(1, n), k - 1):
        edges = (0, *cuts, n)
        best = min(best, sum(_sse(v[edges[i] : edges[i + 1]]) for i in range(k)))
    return best

"""Indiscernibility, positive regions, dependency degree and reducts.

Dependency values are kept as exact ``Fraction`` objects internally so the
greedy stopping test never compares floats for equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .dataset import DecisionTable


class GuardExceededError(ValueError):
    """Exhaustive search refused: too many attributes."""


@dataclass(frozen=True)
class Partition:
    blocks: tuple[frozenset[int], ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def refines(self, other: "Partition") -> bool:
        """True when every block here sits inside some block of ``other``."""
        owner = {}
        for b, block in enumerate(other.blocks):
            for o in block:
                owner[o] = b
        return all(len({owner[o] for o in block}) == 1 for block in self.blocks)


@dataclass
class ReductResult:
    attributes: list[int]
    gamma_trace: list[Fraction]
    gamma_full: Fraction
    reached_full: bool
    gamma_empty: Fraction = Fraction(0)

    @property
    def gamma(self) -> Fraction:
        return self.gamma_trace[-1] if self.gamma_trace else self.gamma_empty


@dataclass
class ReductSetResult:
    all_reducts: list[frozenset[int]]
    min_reducts: list[frozenset[int]]
    core: frozenset[int]
    gamma_full: Fraction


def _block_ids(table: DecisionTable, attrs: Sequence[int]) -> np.ndarray:
    """Dense equivalence-class id per object under ``attrs``."""
    attrs = list(attrs)
    n = table.n_objects
    if not attrs:
        return np.zeros(n, dtype=np.int64)
    _, ids = np.unique(table.cells[:, attrs], axis=0, return_inverse=True)
    return ids.ravel()


def _refine(ids: np.ndarray, column: np.ndarray) -> np.ndarray:
    key = ids * (int(column.max()) + 1 if column.size else 1) + column
    _, out = np.unique(key, return_inverse=True)
    return out.ravel()


def _pure_objects(ids: np.ndarray, decision: np.ndarray) -> np.ndarray:
    """Mask of objects whose block carries a single decision value."""
    if ids.size == 0:
        return np.zeros(0, dtype=bool)
    nb = int(ids.max()) + 1
    lo = np.full(nb, np.iinfo(np.int64).max)
    hi = np.full(nb, -1)
    np.minimum.at(lo, ids, decision)
    np.maximum.at(hi, ids, decision)
    return (lo == hi)[ids]


def _pos_count(ids: np.ndarray, decision: np.ndarray) -> int:
    return int(np.count_nonzero(_pure_objects(ids, decision)))


def _candidate_pos_counts(ids: np.ndarray, columns: np.ndarray, decision: np.ndarray) -> np.ndarray:
    """Positive-region size of ``ids`` refined by each column, all at once."""
    n, a = columns.shape
    width = int(columns.max()) + 1 if columns.size else 1
    per_col = (int(ids.max()) + 1) * width
    flat = ids[:, None] * width + columns + np.arange(a)[None, :] * per_col
    lo = np.full(a * per_col, np.iinfo(np.int64).max)
    hi = np.full(a * per_col, -1)
    dec = np.broadcast_to(decision[:, None], (n, a))
    np.minimum.at(lo, flat.ravel(), dec.ravel())
    np.maximum.at(hi, flat.ravel(), dec.ravel())
    return (lo[flat] == hi[flat]).sum(axis=0)


def partition(table: DecisionTable, attrs: Iterable[int]) -> Partition:
    ids = _block_ids(table, sorted(set(attrs)))
    groups: dict[int, list[int]] = {}
    for obj, b in enumerate(ids.tolist()):
        groups.setdefault(b, []).append(obj)
    # blocks listed by their first object for a stable order
    ordered = sorted(groups.values(), key=lambda g: g[0])
    return Partition(tuple(frozenset(g) for g in ordered))


def positive_region(table: DecisionTable, attrs: Iterable[int]) -> frozenset[int]:
    ids = _block_ids(table, sorted(set(attrs)))
    return frozenset(np.flatnonzero(_pure_objects(ids, table.decision)).tolist())


def gamma_fraction(table: DecisionTable, attrs: Iterable[int]) -> Fraction:
    n = table.n_objects
    if n == 0:
        return Fraction(0)
    return Fraction(_pos_count(_block_ids(table, sorted(set(attrs))), table.decision), n)


def gamma(table: DecisionTable, attrs: Iterable[int]) -> float:
    """Dependency degree |POS_attrs(D)| / |U|."""
    return float(gamma_fraction(table, attrs))


def quick_reduct(table: DecisionTable) -> ReductResult:
    """Greedy forward selection by largest dependency gain.

    Ties go to the lowest attribute index. The search also stops when no
    remaining attribute strictly raises the dependency, which happens on
    tables that are inconsistent even with every attribute.
    """
    if table.n_objects == 0:
        raise ValueError("decision table has no objects")
    n = table.n_objects
    d = table.decision
    full = gamma_fraction(table, range(table.n_attributes))
    ids = np.zeros(n, dtype=np.int64)
    current = _pos_count(ids, d)
    empty = Fraction(current, n)
    chosen: list[int] = []
    trace: list[Fraction] = []
    remaining = list(range(table.n_attributes))

    while Fraction(current, n) != full and remaining:
        counts = _candidate_pos_counts(ids, table.cells[:, remaining], d)
        pick = int(np.argmax(counts))  # first maximum = lowest index
        if counts[pick] <= current:
            break
        best_attr = remaining.pop(pick)
        chosen.append(best_attr)
        ids = _refine(ids, table.cells[:, best_attr])
        current = int(counts[pick])
        trace.append(Fraction(current, n))

    return ReductResult(
        attributes=chosen,
        gamma_trace=trace,
        gamma_full=full,
        reached_full=Fraction(current, n) == full,
        gamma_empty=empty,
    )


def exhaustive_reducts(table: DecisionTable, max_attrs: int = 20) -> ReductSetResult:
    """Enumerate every reduct by brute force over all attribute subsets."""
    na = table.n_attributes
    if na > max_attrs:
        raise GuardExceededError(
            f"{na} attributes exceeds the exhaustive-search guard of {max_attrs}"
        )
    full = gamma_fraction(table, range(na))
    g: dict[frozenset[int], Fraction] = {}
    for size in range(na + 1):
        for combo in itertools.combinations(range(na), size):
            g[frozenset(combo)] = gamma_fraction(table, combo)

    reducts = [
        X for X, val in g.items()
        if val == full and all(g[X - {a}] != val for a in X)
    ]
    reducts.sort(key=lambda X: (len(X), sorted(X)))
    smallest = min(len(X) for X in reducts)
    core = frozenset.intersection(*reducts) if reducts else frozenset()
    return ReductSetResult(
        all_reducts=reducts,
        min_reducts=[X for X in reducts if len(X) == smallest],
        core=core,
        gamma_full=full,
    )

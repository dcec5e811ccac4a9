"""Per-attribute 1-D K-Means discretization.

Each gene is clustered over its sample values independently and the values
are replaced by cluster labels, lowest centroid first. In one dimension the
optimal K-Means clusters are contiguous intervals of the sorted values, so
the default ``optimal`` method solves the problem exactly by dynamic
programming. ``lloyd`` runs classic Lloyd iterations from quantile seeds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import DecisionTable, ExpressionDataset, FeatureSubsetView, build_decision_table

METHODS = ("optimal", "lloyd")


@dataclass(frozen=True)
class DiscretizerConfig:
    bins: int = 3
    max_iters: int = 100
    seed: int = 0  # unused by both deterministic methods
    method: str = "optimal"

    def __post_init__(self):
        if self.bins < 1:
            raise ValueError(f"bins must be >= 1, got {self.bins}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")


def _optimal_segments(x: np.ndarray, w: np.ndarray, k: int) -> np.ndarray:
    """Weighted 1-D K-Means on sorted distinct ``x``; returns segment id per value."""
    n = x.size
    xc = x - np.average(x, weights=w)
    cw = np.concatenate([[0.0], np.cumsum(w)])
    cs = np.concatenate([[0.0], np.cumsum(w * xc)])
    cq = np.concatenate([[0.0], np.cumsum(w * xc * xc)])
    # cost[i, j]: SSE of x[i..j] inclusive
    i, j = np.triu_indices(n)
    cost = np.full((n, n), np.inf)
    sw = cw[j + 1] - cw[i]
    ss = cs[j + 1] - cs[i]
    cost[i, j] = np.maximum(cq[j + 1] - cq[i] - ss * ss / sw, 0.0)

    best = cost[0].copy()  # best[j]: one segment covering x[0..j]
    back = np.zeros((k, n), dtype=int)
    for t in range(1, k):
        # candidate[i, j] = best[i-1] + cost[i, j] for segment start i >= t
        cand = np.full((n, n), np.inf)
        cand[1:, :] = best[:-1, None] + cost[1:, :]
        cand[:t, :] = np.inf
        back[t] = np.argmin(cand, axis=0)
        best = cand[back[t], np.arange(n)]

    seg = np.empty(n, dtype=int)
    end = n - 1
    for t in range(k - 1, -1, -1):
        start = back[t][end] if t > 0 else 0
        seg[start : end + 1] = t
        end = start - 1
    return seg


def _lloyd(values: np.ndarray, k: int, max_iters: int) -> np.ndarray:
    s = np.sort(values)
    centroids = np.quantile(s, (2 * np.arange(k) + 1) / (2 * k))
    labels = np.zeros(values.size, dtype=int)
    for _ in range(max_iters):
        labels = np.argmin(np.abs(values[:, None] - centroids[None, :]), axis=1)
        updated = centroids.copy()
        for j in range(k):
            members = values[labels == j]
            if members.size:
                updated[j] = members.mean()
        if np.array_equal(updated, centroids):
            break
        centroids = updated
    # drop empty clusters and relabel in ascending centroid order
    used = np.unique(labels)
    order = used[np.argsort(centroids[used], kind="stable")]
    remap = np.empty(k, dtype=int)
    remap[order] = np.arange(order.size)
    return remap[labels]


def discretize_attribute(values, config: DiscretizerConfig | None = None) -> np.ndarray:
    """Replace continuous values with K-Means bin labels (0 = lowest bin)."""
    config = config or DiscretizerConfig()
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise ValueError("cannot discretize an empty vector")
    if not np.all(np.isfinite(values)):
        raise ValueError("values must be finite")
    distinct, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    k = min(config.bins, distinct.size)
    if k == 1:
        return np.zeros(values.size, dtype=int)
    if config.method == "lloyd":
        return _lloyd(values, k, config.max_iters)
    seg = _optimal_segments(distinct, counts.astype(float), k)
    return seg[inverse.ravel()]


def within_cluster_sse(values, labels) -> float:
    values = np.asarray(values, dtype=float)
    labels = np.asarray(labels)
    total = 0.0
    for lab in np.unique(labels):
        part = values[labels == lab]
        total += float(np.sum((part - part.mean()) ** 2))
    return total


def discretize_table(
    view: FeatureSubsetView | ExpressionDataset, config: DiscretizerConfig | None = None
) -> DecisionTable:
    if view.n_samples < 1:
        raise ValueError("view has no samples")
    config = config or DiscretizerConfig()
    vectors = [discretize_attribute(row, config) for row in view.values]
    return build_decision_table(view, vectors)

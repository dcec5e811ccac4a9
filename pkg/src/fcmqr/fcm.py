"""Fuzzy C-Means over feature vectors.

Memberships are stored as a ``(c, n_points)`` array so every column sums
to one. Centroids and memberships are updated alternately, the standard
Bezdek scheme, starting from a random membership matrix.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)


class DegenerateClusterError(ArithmeticError):
    """A cluster lost all membership weight, so its centroid is undefined."""


@dataclass(frozen=True)
class FcmConfig:
    c: int
    m: float = 2.0
    epsilon: float = 1e-6
    max_iters: int = 300
    seed: int = 0

    def __post_init__(self):
        if self.c < 1:
            raise ValueError(f"cluster count must be >= 1, got {self.c}")
        if not self.m > 1:
            raise ValueError(f"fuzzifier m must be > 1, got {self.m}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be positive, got {self.max_iters}")
        if not 1.25 <= self.m <= 2.0:
            warnings.warn(
                f"fuzzifier m={self.m} is outside the customary [1.25, 2] range",
                stacklevel=3,
            )


@dataclass
class FcmResult:
    centroids: np.ndarray
    memberships: np.ndarray
    hard_assignment: np.ndarray
    iterations: int
    objective_trace: list[float] = field(default_factory=list)
    converged: bool = False

    def cluster_members(self, j: int) -> np.ndarray:
        return np.flatnonzero(self.hard_assignment == j)

    def sizes(self) -> list[int]:
        return np.bincount(self.hard_assignment, minlength=self.centroids.shape[0]).tolist()


def init_membership(n_points: int, c: int, seed) -> np.ndarray:
    """Random column-stochastic membership matrix, reproducible from ``seed``."""
    if c < 1:
        raise ValueError(f"cluster count must be >= 1, got {c}")
    if c > n_points:
        raise ValueError(f"cannot form {c} clusters from {n_points} points")
    rng = np.random.default_rng(seed)
    # 1 - U[0,1) lies in (0, 1], so no column can sum to zero
    raw = 1.0 - rng.random((c, n_points))
    return raw / raw.sum(axis=0, keepdims=True)


def compute_centroids(points: np.ndarray, mu: np.ndarray, m: float) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    w = np.asarray(mu, dtype=float) ** m
    totals = w.sum(axis=1)
    if np.any(totals <= 0):
        j = int(np.flatnonzero(totals <= 0)[0])
        raise DegenerateClusterError(f"cluster {j} has zero total membership")
    return (w @ points) / totals[:, None]


def squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """``(c, n)`` matrix of squared Euclidean distances."""
    diff = np.asarray(centroids, dtype=float)[:, None, :] - np.asarray(points, dtype=float)[None, :, :]
    return np.einsum("cnd,cnd->cn", diff, diff)


def update_membership(points: np.ndarray, centroids: np.ndarray, m: float) -> np.ndarray:
    """Membership of each point in each cluster given fixed centroids.

    mu[j, i] is proportional to (1 / d2[j, i]) ** (1 / (m - 1)) with d2 the
    squared distance. A point sitting exactly on a centroid is assigned
    wholly to the lowest-index such centroid.
    """
    points = np.asarray(points, dtype=float)
    centroids = np.asarray(centroids, dtype=float)
    if centroids.ndim != 2 or points.ndim != 2 or centroids.shape[1] != points.shape[1]:
        raise ValueError(
            f"dimension mismatch: points {points.shape}, centroids {centroids.shape}"
        )
    if not m > 1:
        raise ValueError(f"fuzzifier m must be > 1, got {m}")
    d2 = squared_distances(points, centroids)
    c, n = d2.shape
    mu = np.zeros((c, n))

    zero = d2 == 0
    hit = zero.any(axis=0)
    if hit.any():
        cols = np.flatnonzero(hit)
        mu[np.argmax(zero[:, cols], axis=0), cols] = 1.0

    free = ~hit
    if free.any():
        # log-space normalisation keeps large exponents (m near 1) finite
        logw = -np.log(d2[:, free]) / (m - 1.0)
        logw -= logw.max(axis=0, keepdims=True)
        w = np.exp(logw)
        mu[:, free] = w / w.sum(axis=0, keepdims=True)
    return mu


def objective(points: np.ndarray, centroids: np.ndarray, mu: np.ndarray, m: float) -> float:
    return float(np.sum(np.asarray(mu) ** m * squared_distances(points, centroids)))


def fit(points: np.ndarray, config: FcmConfig, init: np.ndarray | None = None) -> FcmResult:
    """Run FCM until the largest centroid move drops below ``config.epsilon``.

    Reaching ``max_iters`` is not an error; ``converged`` is False then.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2:
        raise ValueError(f"points must be a 2-D array, got shape {points.shape}")
    n = points.shape[0]
    if init is None:
        mu = init_membership(n, config.c, config.seed)
    else:
        mu = np.array(init, dtype=float)
        if mu.shape != (config.c, n):
            raise ValueError(f"init membership shape {mu.shape}, expected {(config.c, n)}")

    centroids = compute_centroids(points, mu, config.m)
    trace = [objective(points, centroids, mu, config.m)]
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iters + 1):
        mu = update_membership(points, centroids, config.m)
        new_centroids = compute_centroids(points, mu, config.m)
        shift = float(np.max(np.sqrt(np.sum((new_centroids - centroids) ** 2, axis=1))))
        centroids = new_centroids
        trace.append(objective(points, centroids, mu, config.m))
        if shift < config.epsilon:
            converged = True
            break
    if not converged:
        logger.info("FCM stopped at max_iters=%d without converging", config.max_iters)

    return FcmResult(
        centroids=centroids,
        memberships=mu,
        hard_assignment=np.argmax(mu, axis=0),
        iterations=iterations,
        objective_trace=trace,
        converged=converged,
    )

"""Planted-marker synthetic expression data."""

from __future__ import annotations

import numpy as np

from .dataset import ExpressionDataset

CLASSES = ("neg", "pos")
MARGIN = 8.0  # class offset in noise-std units; within-class jitter is +-0.5


def generate_synthetic(
    n_genes: int = 100,
    n_samples: int = 30,
    planted_pair: bool = True,
    noise_seed: int = 0,
) -> ExpressionDataset:
    """Gaussian-noise genes, optionally with a planted class-separating pair.

    Samples alternate between two classes so their sizes differ by at most
    one. With ``planted_pair`` genes 0 and 1 are positive affine images of
    one profile whose classes are at least ``MARGIN - 1`` noise standard
    deviations apart; every other gene is i.i.d. N(0, 1).
    """
    if n_genes < 2:
        raise ValueError(f"need at least 2 genes, got {n_genes}")
    if n_samples < 4:
        raise ValueError(f"need at least 4 samples, got {n_samples}")
    rng = np.random.default_rng(noise_seed)
    cls = np.arange(n_samples) % 2
    values = rng.standard_normal((n_genes, n_samples))
    if planted_pair:
        profile = cls * MARGIN + rng.uniform(-0.5, 0.5, n_samples)
        values[0] = profile
        values[1] = 2.0 * profile + 3.0
    return ExpressionDataset(
        feature_ids=[f"g{i}" for i in range(n_genes)],
        sample_ids=[f"s{j}" for j in range(n_samples)],
        values=values,
        labels=[CLASSES[c] for c in cls],
    )

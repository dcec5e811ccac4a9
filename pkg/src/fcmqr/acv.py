"""Average Correlation Value: homogeneity of a gene x sample submatrix.

The row term is the mean absolute Pearson correlation over all ordered
pairs of distinct rows; the column term is the same over columns. ACV is
the larger of the two, and 1 means the block is perfectly coherent.

Correlations between length-2 vectors are always +-1, so a term built from
them says nothing about the data. When the matrix has exactly two rows (or
columns) and the other side is longer, that degenerate term is reported as
``None`` and left out of the maximum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class AcvReport:
    row_term: float | None
    col_term: float | None
    acv: float
    m: int
    n: int
    degenerate_pairs: int

    def to_dict(self) -> dict:
        return {
            "acv": self.acv,
            "row_term": self.row_term,
            "col_term": self.col_term,
            "m": self.m,
            "n": self.n,
            "degenerate_pairs": self.degenerate_pairs,
        }


def pearson(x, y) -> float:
    """Pearson correlation; 0.0 when either vector is constant."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise ValueError("need at least 2 observations")
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    if sxx == 0.0 or syy == 0.0:
        return 0.0
    r = float(xc @ yc) / np.sqrt(sxx * syy)
    return float(min(1.0, max(-1.0, r)))


def _mean_abs_offdiag(vectors: np.ndarray) -> tuple[float, int]:
    """Mean |r| over ordered pairs of distinct rows, plus constant-pair count."""
    k = vectors.shape[0]
    centered = vectors - vectors.mean(axis=1, keepdims=True)
    norms = np.sqrt(np.einsum("ij,ij->i", centered, centered))
    flat = norms == 0
    unit = np.divide(centered, norms[:, None], out=np.zeros_like(centered), where=~flat[:, None])
    corr = np.clip(np.abs(unit @ unit.T), 0.0, 1.0)
    iu = np.triu_indices(k, 1)
    # upper triangle summed in a fixed order, doubled for the ordered pairs
    total = 2.0 * float(np.sum(corr[iu]))
    degenerate = int(np.count_nonzero(flat[iu[0]] | flat[iu[1]]))
    return total / (k * k - k), degenerate


def acv(matrix) -> AcvReport:
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] < 2 or a.shape[1] < 2:
        raise ValueError(f"ACV needs at least a 2x2 matrix, got shape {a.shape}")
    m, n = a.shape
    row_term, row_deg = _mean_abs_offdiag(a)
    col_term, col_deg = _mean_abs_offdiag(a.T)
    rows_ok = n > 2 or m == 2  # row correlations use length-n vectors
    cols_ok = m > 2 or n == 2
    terms = [t for t, ok in ((row_term, rows_ok), (col_term, cols_ok)) if ok]
    return AcvReport(
        row_term=row_term if rows_ok else None,
        col_term=col_term if cols_ok else None,
        acv=max(terms),
        m=m,
        n=n,
        degenerate_pairs=row_deg + col_deg,
    )


def is_significant(score: float, tolerance: float = 1e-6) -> bool:
    return score >= 1.0 - tolerance

"""Expression data ingestion, feature subsetting and decision tables.

The canonical in-memory layout is feature x sample: FCM treats every gene
as a point in sample space. Decision tables flip to sample rows because the
rough-set side partitions samples.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np


class DatasetError(ValueError):
    """Raised for malformed expression or table files."""


class MissingLabelError(DatasetError):
    pass


class DimensionMismatchError(DatasetError):
    pass


class NonNumericCellError(DatasetError):
    pass


class DuplicateIdError(DatasetError):
    pass


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ExpressionDataset:
    feature_ids: tuple[str, ...]
    sample_ids: tuple[str, ...]
    values: np.ndarray  # [feature, sample]
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "feature_ids", tuple(str(f) for f in self.feature_ids))
        object.__setattr__(self, "sample_ids", tuple(str(s) for s in self.sample_ids))
        object.__setattr__(self, "labels", tuple(str(lab) for lab in self.labels))
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            values = values.reshape(len(self.feature_ids), len(self.sample_ids))
        object.__setattr__(self, "values", _frozen(values))

        nf, ns = len(self.feature_ids), len(self.sample_ids)
        if self.values.shape != (nf, ns):
            raise DimensionMismatchError(
                f"values shape {self.values.shape} does not match "
                f"{nf} features x {ns} samples"
            )
        if len(self.labels) != ns:
            raise DimensionMismatchError(
                f"{len(self.labels)} labels for {ns} samples"
            )
        _check_unique(self.feature_ids, "feature")
        _check_unique(self.sample_ids, "sample")
        if not np.all(np.isfinite(self.values)):
            f, s = np.argwhere(~np.isfinite(self.values))[0]
            raise NonNumericCellError(
                f"non-finite value at feature {self.feature_ids[f]!r}, "
                f"sample {self.sample_ids[s]!r}"
            )

    @property
    def n_features(self) -> int:
        return len(self.feature_ids)

    @property
    def n_samples(self) -> int:
        return len(self.sample_ids)

    @property
    def classes(self) -> tuple[str, ...]:
        """Class names in first-appearance order."""
        return tuple(dict.fromkeys(self.labels))

    @property
    def class_indices(self) -> np.ndarray:
        lookup = {c: i for i, c in enumerate(self.classes)}
        return np.array([lookup[lab] for lab in self.labels], dtype=int)

    def feature_index(self, feature_id: str) -> int:
        try:
            return self.feature_ids.index(feature_id)
        except ValueError:
            raise KeyError(f"unknown feature {feature_id!r}") from None

    def class_counts(self) -> dict[str, int]:
        return {c: self.labels.count(c) for c in self.classes}

    def standardized(self) -> "ExpressionDataset":
        """Per-feature z-scores across samples; constant features become 0."""
        mean = self.values.mean(axis=1, keepdims=True)
        std = self.values.std(axis=1, keepdims=True)
        z = np.divide(self.values - mean, std, out=np.zeros_like(self.values), where=std > 0)
        return ExpressionDataset(self.feature_ids, self.sample_ids, z, self.labels)


def _check_unique(ids: Sequence[str], kind: str) -> None:
    seen: dict[str, int] = {}
    for pos, ident in enumerate(ids):
        if ident in seen:
            raise DuplicateIdError(
                f"duplicate {kind} id {ident!r} at positions {seen[ident]} and {pos}"
            )
        seen[ident] = pos


@dataclass(frozen=True)
class FeatureSubsetView:
    """A read-only selection of features from a parent dataset."""

    parent: ExpressionDataset
    indices: tuple[int, ...]

    @property
    def feature_ids(self) -> tuple[str, ...]:
        return tuple(self.parent.feature_ids[i] for i in self.indices)

    @property
    def sample_ids(self) -> tuple[str, ...]:
        return self.parent.sample_ids

    @property
    def labels(self) -> tuple[str, ...]:
        return self.parent.labels

    @property
    def values(self) -> np.ndarray:
        return self.parent.values[list(self.indices), :].reshape(
            len(self.indices), self.parent.n_samples
        )

    @property
    def n_features(self) -> int:
        return len(self.indices)

    @property
    def n_samples(self) -> int:
        return self.parent.n_samples

    def to_dataset(self) -> ExpressionDataset:
        return ExpressionDataset(self.feature_ids, self.sample_ids, self.values, self.labels)


def subset_features(
    ds: ExpressionDataset | FeatureSubsetView, indices: Sequence[int]
) -> FeatureSubsetView:
    """Select features by position.

    Indices are relative to ``ds``; subsetting a view composes onto the
    original parent so views never nest.
    """
    indices = tuple(int(i) for i in indices)
    n = ds.n_features
    if len(set(indices)) != len(indices):
        raise ValueError(f"duplicate feature indices in {list(indices)}")
    for i in indices:
        if not 0 <= i < n:
            raise IndexError(f"feature index {i} out of range for {n} features")
    if isinstance(ds, FeatureSubsetView):
        return FeatureSubsetView(ds.parent, tuple(ds.indices[i] for i in indices))
    return FeatureSubsetView(ds, indices)


@dataclass(frozen=True, eq=False)
class DecisionTable:
    """Discretized samples x attributes table with a decision column."""

    object_ids: tuple[str, ...]
    attribute_ids: tuple[str, ...]
    cells: np.ndarray  # [object, attribute], small non-negative ints
    decision: np.ndarray  # [object], class index
    class_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "object_ids", tuple(self.object_ids))
        object.__setattr__(self, "attribute_ids", tuple(self.attribute_ids))
        cells = np.asarray(self.cells, dtype=np.int64).reshape(
            len(self.object_ids), len(self.attribute_ids)
        )
        decision = np.asarray(self.decision, dtype=np.int64)
        if decision.shape != (len(self.object_ids),):
            raise DimensionMismatchError(
                f"decision length {decision.shape} for {len(self.object_ids)} objects"
            )
        for a in range(cells.shape[1]):
            present = np.unique(cells[:, a])
            if present.size and not np.array_equal(present, np.arange(present.size)):
                raise DatasetError(
                    f"attribute {self.attribute_ids[a]!r} labels {present.tolist()} "
                    "are not a contiguous range starting at 0"
                )
        object.__setattr__(self, "cells", _frozen(cells))
        object.__setattr__(self, "decision", _frozen(decision))
        if not self.class_names:
            n_cls = int(decision.max()) + 1 if decision.size else 0
            object.__setattr__(self, "class_names", tuple(str(i) for i in range(n_cls)))

    @property
    def n_objects(self) -> int:
        return len(self.object_ids)

    @property
    def n_attributes(self) -> int:
        return len(self.attribute_ids)


def build_decision_table(
    view: FeatureSubsetView | ExpressionDataset, label_vectors: Sequence[Sequence[int]]
) -> DecisionTable:
    """Assemble a Table-1 style decision table from per-feature discrete labels."""
    if len(label_vectors) != view.n_features:
        raise DimensionMismatchError(
            f"{len(label_vectors)} label vectors for {view.n_features} features"
        )
    ns = view.n_samples
    for fid, vec in zip(view.feature_ids, label_vectors):
        if len(vec) != ns:
            raise DimensionMismatchError(
                f"label vector for feature {fid!r} has length {len(vec)}, expected {ns}"
            )
    cells = np.array(label_vectors, dtype=np.int64).reshape(view.n_features, ns).T
    classes = tuple(dict.fromkeys(view.labels))
    lookup = {c: i for i, c in enumerate(classes)}
    decision = np.array([lookup[lab] for lab in view.labels], dtype=np.int64)
    return DecisionTable(view.sample_ids, view.feature_ids, cells, decision, classes)


# --------------------------------------------------------------------------
# CSV I/O


def _read_rows(path: str | Path, delimiter: str) -> list[list[str]]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    with path.open(newline="") as fh:
        rows = [row for row in csv.reader(fh, delimiter=delimiter) if any(c.strip() for c in row)]
    if not rows:
        raise DatasetError(f"{path} is empty")
    return [[c.strip() for c in row] for row in rows]


def _parse_float(text: str, row: int, col: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise NonNumericCellError(
            f"non-numeric cell {text!r} at row {row + 1}, column {col + 1}"
        ) from None
    if not math.isfinite(value):
        raise NonNumericCellError(f"non-finite cell {text!r} at row {row + 1}, column {col + 1}")
    return value


def load_csv(
    path: str | Path,
    orientation: str = "features",
    label: str = "class",
    delimiter: str = ",",
) -> ExpressionDataset:
    """Read a delimited expression file.

    ``orientation="features"``: the header row holds sample ids and each
    following row is one feature, with one row named ``label`` carrying the
    class of every sample. ``orientation="samples"``: the header row holds
    feature ids, each row is a sample, and the ``label`` column carries its
    class. The first cell of every row is an identifier either way.
    """
    if orientation not in ("features", "samples"):
        raise ValueError(f"orientation must be 'features' or 'samples', got {orientation!r}")
    rows = _read_rows(path, delimiter)
    header = rows[0]
    width = len(header)
    for r, row in enumerate(rows):
        if len(row) != width:
            raise DimensionMismatchError(
                f"row {r + 1} has {len(row)} cells, header has {width}"
            )

    if orientation == "features":
        sample_ids = header[1:]
        label_rows = [r for r, row in enumerate(rows) if r > 0 and row[0] == label]
        if not label_rows:
            raise MissingLabelError(f"no row named {label!r} (first column) in {path}")
        lr = label_rows[0]
        labels = rows[lr][1:]
        feature_ids, values = [], []
        for r, row in enumerate(rows):
            if r == 0 or r == lr:
                continue
            feature_ids.append(row[0])
            values.append([_parse_float(cell, r, c + 1) for c, cell in enumerate(row[1:])])
    else:
        if label not in header[1:]:
            raise MissingLabelError(f"no column named {label!r} in header of {path}")
        lc = header.index(label)
        feature_cols = [c for c in range(1, width) if c != lc]
        feature_ids = [header[c] for c in feature_cols]
        sample_ids, labels, by_sample = [], [], []
        for r, row in enumerate(rows[1:], start=1):
            sample_ids.append(row[0])
            labels.append(row[lc])
            by_sample.append([_parse_float(row[c], r, c) for c in feature_cols])
        values = np.array(by_sample, dtype=float).reshape(len(sample_ids), len(feature_ids)).T

    for pos, lab in enumerate(labels):
        if lab == "":
            raise MissingLabelError(f"empty class label for sample {sample_ids[pos]!r}")
    values = np.array(values, dtype=float).reshape(len(feature_ids), len(sample_ids))
    return ExpressionDataset(feature_ids, sample_ids, values, labels)


def write_csv(
    ds: ExpressionDataset,
    path: str | Path,
    orientation: str = "features",
    label: str = "class",
    delimiter: str = ",",
) -> None:
    # repr() gives the shortest string that round-trips to the same double
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        if orientation == "features":
            w.writerow(["id", *ds.sample_ids])
            w.writerow([label, *ds.labels])
            for fid, row in zip(ds.feature_ids, ds.values):
                w.writerow([fid, *(repr(float(v)) for v in row)])
        elif orientation == "samples":
            w.writerow(["id", *ds.feature_ids, label])
            for s, sid in enumerate(ds.sample_ids):
                w.writerow([sid, *(repr(float(v)) for v in ds.values[:, s]), ds.labels[s]])
        else:
            raise ValueError(f"unknown orientation {orientation!r}")


def write_decision_table(table: DecisionTable, path: str | Path, label: str = "class") -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", *table.attribute_ids, label])
        for o, oid in enumerate(table.object_ids):
            w.writerow([oid, *table.cells[o].tolist(), table.class_names[table.decision[o]]])


def _dense_codes(column: Sequence[str]) -> list[int]:
    try:
        keys = [float(c) for c in column]
    except ValueError:
        keys = list(column)
    order = sorted(set(keys))
    lookup = {k: i for i, k in enumerate(order)}
    return [lookup[k] for k in keys]


def load_decision_table(path: str | Path, label: str = "class", delimiter: str = ",") -> DecisionTable:
    """Read a sample-rows decision table.

    Attribute cells may be any tokens; each column is re-coded to 0..b-1 in
    sorted order, which preserves the indiscernibility relation.
    """
    rows = _read_rows(path, delimiter)
    header = rows[0]
    if label not in header[1:]:
        raise MissingLabelError(f"no column named {label!r} in header of {path}")
    lc = header.index(label)
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise DimensionMismatchError(f"row {r + 1} has {len(row)} cells, header has {len(header)}")
    attr_cols = [c for c in range(1, len(header)) if c != lc]
    body = rows[1:]
    _check_unique([row[0] for row in body], "object")
    _check_unique([header[c] for c in attr_cols], "attribute")
    columns = [_dense_codes([row[c] for row in body]) for c in attr_cols]
    cells = np.array(columns, dtype=np.int64).reshape(len(attr_cols), len(body)).T
    raw = [row[lc] for row in body]
    classes = tuple(dict.fromkeys(raw))
    lookup = {c: i for i, c in enumerate(classes)}
    return DecisionTable(
        tuple(row[0] for row in body),
        tuple(header[c] for c in attr_cols),
        cells,
        np.array([lookup[x] for x in raw], dtype=np.int64),
        classes,
    )


def load_matrix(path: str | Path, delimiter: str = ",") -> np.ndarray:
    """Read a plain numeric matrix, tolerating an optional header row and id column."""
    rows = _read_rows(path, delimiter)

    def numeric(cell: str) -> bool:
        try:
            float(cell)
            return True
        except ValueError:
            return False

    if not all(numeric(c) for c in rows[0]):
        rows = rows[1:]
    if rows and not all(numeric(row[0]) for row in rows):
        rows = [row[1:] for row in rows]
    if not rows:
        raise DatasetError(f"{path} holds no numeric rows")
    width = len(rows[0])
    out = []
    for r, row in enumerate(rows):
        if len(row) != width:
            raise DimensionMismatchError(f"matrix row {r + 1} has {len(row)} cells, expected {width}")
        out.append([_parse_float(c, r, j) for j, c in enumerate(row)])
    return np.array(out, dtype=float)

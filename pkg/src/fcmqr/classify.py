"""Small from-scratch classifiers and an evaluation harness.

Four model kinds stand in for the usual benchmark suite: Gaussian naive
Bayes, a single-feature decision stump (the decision-table stand-in), a
depth-limited information-gain tree and Euclidean 1-nearest-neighbour.
Everything works on integer class indices and is fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dataset import ExpressionDataset, FeatureSubsetView, subset_features

KINDS = ("naive-bayes", "decision-table", "tree", "nearest-neighbor")
ALIASES = {
    "nb": "naive-bayes",
    "naive": "naive-bayes",
    "dt": "decision-table",
    "stump": "decision-table",
    "j48": "tree",
    "knn": "nearest-neighbor",
    "1nn": "nearest-neighbor",
    "kstar": "nearest-neighbor",
}
VAR_FLOOR = 1e-9
TREE_DEPTH = 4


def resolve_kind(kind: str) -> str:
    kind = ALIASES.get(kind.lower(), kind.lower())
    if kind not in KINDS:
        raise ValueError(f"unknown classifier {kind!r}; choose from {KINDS}")
    return kind


@dataclass
class ClassifierModel:
    kind: str
    n_features: int
    params: dict = field(default_factory=dict)

    def predict(self, x) -> int:
        return predict(self, x)


def _majority(y: np.ndarray) -> int:
    counts = np.bincount(y)
    return int(np.argmax(counts))


# ---------------------------------------------------------------- stump


def _best_split(X: np.ndarray, y: np.ndarray, score: str):
    """Best (score, feature, threshold) over midpoints of consecutive distinct values.

    ``score`` is ``"accuracy"`` (majority on each side) or ``"gain"``
    (information gain). Returns None when no feature has two distinct values.
    Ties resolve to the lowest feature, then the lowest threshold.
    """
    n, n_feat = X.shape
    if n < 2 or n_feat == 0:
        return None
    n_classes = int(y.max()) + 1
    order = np.argsort(X, axis=0, kind="stable")
    xs = np.take_along_axis(X, order, axis=0)
    valid = xs[1:] > xs[:-1]  # (n-1, F): a split after row i is possible
    if not valid.any():
        return None
    onehot = np.eye(n_classes)[y]  # (n, C)
    left = np.cumsum(onehot[order], axis=0)[:-1]  # (n-1, F, C)
    right = onehot.sum(axis=0) - left
    if score == "accuracy":
        values = left.max(axis=2) + right.max(axis=2)
    else:
        base = _entropy(onehot.sum(axis=0))
        nl = left.sum(axis=2)
        values = base - (nl * _entropy_last(left) + (n - nl) * _entropy_last(right)) / n
    values = np.where(valid, values, -np.inf)
    flat = int(np.argmax(values.T))  # feature-major: lowest feature, then threshold
    f, pos = divmod(flat, n - 1)
    threshold = (xs[pos, f] + xs[pos + 1, f]) / 2.0
    return float(values[pos, f]), f, float(threshold)


def _entropy(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def _entropy_last(counts: np.ndarray) -> np.ndarray:
    """Entropy along the last (class) axis."""
    total = counts.sum(axis=-1, keepdims=True)
    p = np.divide(counts, total, out=np.zeros_like(counts), where=total > 0)
    logp = np.log2(p, out=np.zeros_like(p), where=p > 0)
    return -(p * logp).sum(axis=-1)


def _side_majority(y: np.ndarray, n_classes: int) -> int:
    return int(np.argmax(np.bincount(y, minlength=n_classes)))


def _train_stump(X, y, n_classes):
    split = _best_split(X, y, "accuracy")
    if split is None:
        return {"constant": _majority(y)}
    _, f, t = split
    below = X[:, f] <= t
    return {
        "feature": f,
        "threshold": t,
        "below": _side_majority(y[below], n_classes),
        "above": _side_majority(y[~below], n_classes),
    }


# ---------------------------------------------------------------- tree


def _grow(X, y, n_classes, depth):
    leaf = {"leaf": _side_majority(y, n_classes)}
    if depth == 0 or np.all(y == y[0]):
        return leaf
    split = _best_split(X, y, "gain")
    if split is None or split[0] <= 1e-12:
        return leaf
    _, f, t = split
    below = X[:, f] <= t
    return {
        "feature": f,
        "threshold": t,
        "below": _grow(X[below], y[below], n_classes, depth - 1),
        "above": _grow(X[~below], y[~below], n_classes, depth - 1),
    }


def _walk(node, x):
    while "leaf" not in node:
        node = node["below"] if x[node["feature"]] <= node["threshold"] else node["above"]
    return node["leaf"]


# ---------------------------------------------------------------- API


def train(kind: str, X, y=None, max_depth: int = TREE_DEPTH) -> ClassifierModel:
    """Fit a model on ``X`` (samples x features) and class indices ``y``.

    ``X`` may also be a dataset or feature view, in which case its
    transposed values and class indices are used.
    """
    kind = resolve_kind(kind)
    if isinstance(X, (ExpressionDataset, FeatureSubsetView)):
        data = X.to_dataset() if isinstance(X, FeatureSubsetView) else X
        X, y = data.values.T, data.class_indices
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-D, got shape {X.shape}")
    if y.size == 0 or X.shape[0] == 0:
        raise ValueError("empty training set")
    if y.size != X.shape[0]:
        raise ValueError(f"{X.shape[0]} samples but {y.size} labels")
    n_classes = int(y.max()) + 1
    model = ClassifierModel(kind, X.shape[1])

    if kind == "naive-bayes":
        present = np.flatnonzero(np.bincount(y, minlength=n_classes))
        means = np.array([X[y == c].mean(axis=0) for c in present])
        var = np.array([np.maximum(X[y == c].var(axis=0), VAR_FLOOR) for c in present])
        priors = np.array([np.mean(y == c) for c in present])
        model.params = {"classes": present, "means": means, "var": var, "log_prior": np.log(priors)}
    elif kind == "decision-table":
        model.params = _train_stump(X, y, n_classes)
    elif kind == "tree":
        model.params = {"root": _grow(X, y, n_classes, max_depth)}
    else:
        model.params = {"X": X.copy(), "y": y.copy()}
    return model


def log_posteriors(model: ClassifierModel, x) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalised log posteriors of a naive-Bayes model, with their classes."""
    p = model.params
    x = np.asarray(x, dtype=float)
    ll = -0.5 * np.sum(np.log(2 * np.pi * p["var"]) + (x - p["means"]) ** 2 / p["var"], axis=1)
    return p["classes"], p["log_prior"] + ll


def predict(model: ClassifierModel, x) -> int:
    x = np.asarray(x, dtype=float).ravel()
    if x.size != model.n_features:
        raise ValueError(f"expected {model.n_features} features, got {x.size}")
    p = model.params
    if model.kind == "naive-bayes":
        classes, scores = log_posteriors(model, x)
        return int(classes[np.argmax(scores)])
    if model.kind == "decision-table":
        if "constant" in p:
            return p["constant"]
        return p["below"] if x[p["feature"]] <= p["threshold"] else p["above"]
    if model.kind == "tree":
        return _walk(p["root"], x)
    d = np.sum((p["X"] - x) ** 2, axis=1)
    return int(p["y"][np.argmin(d)])


# ---------------------------------------------------------------- evaluation


@dataclass
class EvalReport:
    classifier: str
    accuracy: float
    confusion: list[list[int]]
    scheme: str
    train_size: int
    test_size: int
    features: list[str]
    classes: list[str]

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def accuracy_percent(correct: int, total: int) -> float:
    return round(100.0 * correct / total, 4)


def _report(kind, truth, preds, classes, scheme, n_train, n_test, features):
    k = len(classes)
    conf = np.zeros((k, k), dtype=int)
    for t, p in zip(truth, preds):
        conf[t, p] += 1
    return EvalReport(
        classifier=kind,
        accuracy=accuracy_percent(int(np.trace(conf)), int(conf.sum())),
        confusion=conf.tolist(),
        scheme=scheme,
        train_size=n_train,
        test_size=n_test,
        features=list(features),
        classes=list(classes),
    )


def _feature_indices(ds: ExpressionDataset, features) -> list[int]:
    if features is None:
        return list(range(ds.n_features))
    return [ds.feature_index(f) if isinstance(f, str) else int(f) for f in features]


def loocv_predictions(kind: str, X: np.ndarray, y: np.ndarray) -> list[int]:
    """Leave-one-out predictions for samples x features ``X``."""
    n = y.size
    preds = []
    for i in range(n):
        keep = np.arange(n) != i
        model = train(kind, X[keep], y[keep])
        preds.append(predict(model, X[i]))
    return preds


def evaluate(
    kind: str,
    dataset: ExpressionDataset,
    features: Sequence[str | int] | None = None,
    test: ExpressionDataset | None = None,
) -> EvalReport:
    """Accuracy of one classifier on a feature subset.

    Without ``test`` the score is leave-one-out over ``dataset``; with it,
    the model trains on ``dataset`` and is scored on ``test``. Test features
    are matched by id, and any test-only classes are appended after the
    training classes.
    """
    kind = resolve_kind(kind)
    idx = _feature_indices(dataset, features)
    view = subset_features(dataset, idx)
    fids = view.feature_ids
    X = view.values.T
    if test is None:
        y = dataset.class_indices
        preds = loocv_predictions(kind, X, y)
        return _report(kind, y, preds, dataset.classes, "loocv", dataset.n_samples - 1, dataset.n_samples, fids)

    classes = list(dict.fromkeys([*dataset.classes, *test.classes]))
    lookup = {c: i for i, c in enumerate(classes)}
    y_train = np.array([lookup[c] for c in dataset.labels])
    y_test = np.array([lookup[c] for c in test.labels])
    X_test = test.values[[test.feature_index(f) for f in fids], :].T
    model = train(kind, X, y_train)
    preds = [predict(model, row) for row in X_test]
    return _report(kind, y_test, preds, classes, "split", dataset.n_samples, test.n_samples, fids)


# ---------------------------------------------------------------- rules


@dataclass(frozen=True)
class ThresholdRule:
    feature_id: str
    threshold: float
    class_above: str
    class_below: str

    def __post_init__(self):
        if self.class_above == self.class_below:
            raise ValueError("rule classes must differ")

    def apply(self, value: float) -> str:
        return self.class_above if value > self.threshold else self.class_below

    def __str__(self) -> str:
        t = f"{self.threshold:g}"
        return (
            f"if g({self.feature_id}) > {t} then {self.class_above}; "
            f"if g({self.feature_id}) <= {t} then {self.class_below}"
        )


def induce_threshold_rule(dataset: ExpressionDataset | FeatureSubsetView, feature_id: str) -> ThresholdRule:
    """Single-gene two-class rule with the best training accuracy.

    Candidates are midpoints between consecutive distinct values; both
    orientations are tried and ties keep the lowest threshold.
    """
    classes = tuple(dict.fromkeys(dataset.labels))
    if len(classes) != 2:
        raise ValueError(f"threshold rules need exactly two classes, found {len(classes)}")
    f = list(dataset.feature_ids).index(feature_id)
    x = np.asarray(dataset.values[f], dtype=float)
    is_second = np.array([lab == classes[1] for lab in dataset.labels])
    distinct = np.unique(x)
    if distinct.size < 2:
        raise ValueError(f"feature {feature_id!r} is constant")
    best = None
    for t in (distinct[1:] + distinct[:-1]) / 2.0:
        above = x > t
        hits = int(np.sum(above == is_second))  # second class above
        for score, hi, lo in ((hits, classes[1], classes[0]), (x.size - hits, classes[0], classes[1])):
            if best is None or score > best[0]:
                best = (score, float(t), hi, lo)
    _, t, hi, lo = best
    return ThresholdRule(feature_id, t, hi, lo)

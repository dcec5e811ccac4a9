import numpy as np
import pytest

from fcmqr.dataset import DecisionTable, ExpressionDataset


def make_table(cells, decision):
    cells = np.asarray(cells, dtype=int)
    # re-code each column to 0..b-1 as the table invariant requires
    coded = np.column_stack([np.unique(col, return_inverse=True)[1].ravel() for col in cells.T]) if cells.size else cells
    n = len(decision)
    return DecisionTable(
        tuple(f"o{i}" for i in range(n)),
        tuple(f"a{j}" for j in range(cells.shape[1] if cells.ndim == 2 else 0)),
        coded.reshape(n, -1),
        decision,
    )


def random_table(rng, max_objects=8, max_attrs=5, max_labels=3):
    n = int(rng.integers(1, max_objects + 1))
    a = int(rng.integers(1, max_attrs + 1))
    cells = rng.integers(0, max_labels, size=(n, a))
    decision = rng.integers(0, 2, size=n)
    return make_table(cells, decision)


@pytest.fixture
def toy_dataset():
    return ExpressionDataset(
        feature_ids=["f0", "f1", "f2", "f3", "f4"],
        sample_ids=["s0", "s1", "s2"],
        values=np.arange(15, dtype=float).reshape(5, 3),
        labels=["A", "A", "B"],
    )


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])

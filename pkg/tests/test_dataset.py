import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcmqr.dataset import (
    DatasetError,
    DimensionMismatchError,
    DuplicateIdError,
    ExpressionDataset,
    MissingLabelError,
    NonNumericCellError,
    build_decision_table,
    load_csv,
    load_decision_table,
    load_matrix,
    subset_features,
    write_csv,
    write_decision_table,
)


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_features_orientation(tmp_path):
    p = write(tmp_path, "id,s1,s2,s3\nclass,ALL,AML,ALL\n#1,1.5,2,3\n#2,-4,5e2,6\n")
    ds = load_csv(p)
    assert ds.feature_ids == ("#1", "#2")
    assert ds.sample_ids == ("s1", "s2", "s3")
    assert ds.labels == ("ALL", "AML", "ALL")
    np.testing.assert_array_equal(ds.values, [[1.5, 2, 3], [-4, 500, 6]])
    assert ds.class_counts() == {"ALL": 2, "AML": 1}


def test_load_samples_orientation_matches(tmp_path):
    a = load_csv(write(tmp_path, "id,s1,s2\nclass,A,B\ng1,1,2\ng2,3,4\n", "a.csv"))
    b = load_csv(
        write(tmp_path, "id,g1,g2,class\ns1,1,3,A\ns2,2,4,B\n", "b.csv"), orientation="samples"
    )
    assert a.feature_ids == b.feature_ids
    assert a.labels == b.labels
    np.testing.assert_array_equal(a.values, b.values)


def test_singleton_file(tmp_path):
    ds = load_csv(write(tmp_path, "id,s\nclass,X\ng,7\n"))
    assert ds.values.shape == (1, 1)


def test_non_numeric_cell_names_coordinates(tmp_path):
    p = write(tmp_path, "id,s1,s2\nclass,A,B\ng1,1,abc\n")
    with pytest.raises(NonNumericCellError, match=r"'abc'.*row 3, column 3"):
        load_csv(p)


def test_missing_label(tmp_path):
    with pytest.raises(MissingLabelError):
        load_csv(write(tmp_path, "id,s1\ng1,1\n"))
    with pytest.raises(MissingLabelError):
        load_csv(write(tmp_path, "id,s1\ng1,1\n"), label="kind")


def test_dimension_mismatch(tmp_path):
    with pytest.raises(DimensionMismatchError, match="row 3"):
        load_csv(write(tmp_path, "id,s1,s2\nclass,A,B\ng1,1\n"))


def test_duplicate_ids(tmp_path):
    with pytest.raises(DuplicateIdError, match="g1"):
        load_csv(write(tmp_path, "id,s1,s2\nclass,A,B\ng1,1,2\ng1,3,4\n"))
    with pytest.raises(DuplicateIdError, match="s1"):
        load_csv(write(tmp_path, "id,s1,s1\nclass,A,B\ng1,1,2\n"))


def test_missing_values_rejected(tmp_path):
    with pytest.raises(NonNumericCellError):
        load_csv(write(tmp_path, "id,s1,s2\nclass,A,B\ng1,1,\n"))
    with pytest.raises(NonNumericCellError):
        load_csv(write(tmp_path, "id,s1,s2\nclass,A,B\ng1,1,nan\n"))


def test_labels_case_sensitive(tmp_path):
    ds = load_csv(write(tmp_path, "id,s1,s2\nclass,aml,AML\ng1,1,2\n"))
    assert ds.classes == ("aml", "AML")


def test_delimiter(tmp_path):
    ds = load_csv(write(tmp_path, "id\ts1\nclass\tA\ng\t2\n"), delimiter="\t")
    assert ds.values[0, 0] == 2


def test_dataset_is_immutable(toy_dataset):
    with pytest.raises(ValueError):
        toy_dataset.values[0, 0] = 1.0


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=3, max_size=3),
        min_size=1,
        max_size=5,
    )
)
def test_round_trip_bit_identical(tmp_path_factory, rows):
    ds = ExpressionDataset(
        [f"g{i}" for i in range(len(rows))], ["a", "b", "c"], np.array(rows), ["x", "y", "x"]
    )
    p = tmp_path_factory.mktemp("rt") / "ds.csv"
    for orient in ("features", "samples"):
        write_csv(ds, p, orientation=orient)
        back = load_csv(p, orientation=orient)
        assert back.values.tobytes() == ds.values.tobytes()
        assert back.labels == ds.labels


def test_subset_examples(toy_dataset):
    full = subset_features(toy_dataset, range(5))
    np.testing.assert_array_equal(full.values, toy_dataset.values)
    empty = subset_features(toy_dataset, [])
    assert empty.values.shape == (0, 3)
    assert empty.labels == toy_dataset.labels
    v = subset_features(toy_dataset, [1, 3])
    assert v.feature_ids == ("f1", "f3")
    np.testing.assert_array_equal(v.values, toy_dataset.values[[1, 3]])
    assert v.sample_ids == toy_dataset.sample_ids


def test_subset_errors(toy_dataset):
    with pytest.raises(IndexError):
        subset_features(toy_dataset, [5])
    with pytest.raises(ValueError):
        subset_features(toy_dataset, [1, 1])


@given(st.data())
def test_subset_composes(data):
    n = data.draw(st.integers(1, 8))
    ds = ExpressionDataset(
        [f"g{i}" for i in range(n)], ["s0", "s1"], np.arange(2 * n, dtype=float).reshape(n, 2), ["a", "b"]
    )
    a = data.draw(st.lists(st.integers(0, n - 1), unique=True))
    b = data.draw(st.lists(st.integers(0, max(len(a) - 1, 0)), unique=True)) if a else []
    nested = subset_features(subset_features(ds, a), b)
    direct = subset_features(ds, [a[i] for i in b])
    assert nested.indices == direct.indices
    np.testing.assert_array_equal(nested.values, direct.values)


def test_build_decision_table(toy_dataset):
    view = subset_features(toy_dataset, [0, 1])
    table = build_decision_table(view, [[0, 1, 1], [1, 0, 0]])
    assert table.cells.shape == (3, 2)
    np.testing.assert_array_equal(table.cells, [[0, 1], [1, 0], [1, 0]])
    np.testing.assert_array_equal(table.decision, [0, 0, 1])
    assert table.class_names == ("A", "B")
    assert table.object_ids == toy_dataset.sample_ids


def test_build_decision_table_empty_view(toy_dataset):
    table = build_decision_table(subset_features(toy_dataset, []), [])
    assert table.cells.shape == (3, 0)
    np.testing.assert_array_equal(table.decision, [0, 0, 1])


def test_build_decision_table_length_mismatch(toy_dataset):
    with pytest.raises(DimensionMismatchError):
        build_decision_table(subset_features(toy_dataset, [0]), [[0, 1]])


def test_decision_table_rejects_gapped_labels(toy_dataset):
    with pytest.raises(DatasetError, match="contiguous"):
        build_decision_table(subset_features(toy_dataset, [0]), [[0, 2, 2]])


def test_decision_table_preserves_order_and_multiset():
    ds = ExpressionDataset(["g"], list("pqrst"), [[1, 2, 3, 4, 5]], list("BABBA"))
    table = build_decision_table(subset_features(ds, [0]), [[0, 0, 1, 1, 1]])
    assert table.object_ids == tuple("pqrst")
    assert [table.class_names[d] for d in table.decision] == list("BABBA")


def test_decision_table_csv_round_trip(tmp_path, toy_dataset):
    table = build_decision_table(subset_features(toy_dataset, [0, 1]), [[0, 1, 1], [1, 0, 0]])
    write_decision_table(table, tmp_path / "t.csv")
    back = load_decision_table(tmp_path / "t.csv")
    np.testing.assert_array_equal(back.cells, table.cells)
    np.testing.assert_array_equal(back.decision, table.decision)
    assert back.attribute_ids == table.attribute_ids


def test_load_matrix_header_and_ids(tmp_path):
    m = load_matrix(write(tmp_path, "gene,s1,s2\ng1,1,2\ng2,3,4\n"))
    np.testing.assert_array_equal(m, [[1, 2], [3, 4]])
    m = load_matrix(write(tmp_path, "1,2,3\n4,5,6\n", "p.csv"))
    assert m.shape == (2, 3)


def test_standardized():
    ds = ExpressionDataset(["a", "b"], ["x", "y", "z"], [[1, 2, 3], [5, 5, 5]], ["p", "q", "p"])
    z = ds.standardized()
    np.testing.assert_allclose(z.values[0].mean(), 0, atol=1e-12)
    np.testing.assert_allclose(z.values[0].std(), 1)
    np.testing.assert_array_equal(z.values[1], 0)

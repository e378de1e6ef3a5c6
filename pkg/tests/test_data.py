import json
import math

import numpy as np
import pytest

from relieflab.data import (
    Dataset,
    FeatureMeta,
    categoric,
    class_conditional_table,
    compute_stats,
    numeric,
    read_dataset,
    sidecar_path,
    write_dataset,
)
from relieflab.errors import DatasetError, DegenerateStatisticsError


class TestComputeStats:
    def test_class_priors(self):
        ds = Dataset.from_rows([numeric("x")], [[0.0], [1.0], [2.0]], [0, 0, 1])
        np.testing.assert_allclose(ds.class_priors, [2 / 3, 1 / 3])
        assert abs(ds.class_priors.sum() - 1) < 1e-9

    def test_numeric_range(self):
        ds = Dataset.from_rows([numeric("x")], [[0.2], [0.7], [0.5]], [0, 1, 0])
        assert ds.features[0].observed_min == 0.2
        assert ds.features[0].observed_max == 0.7

    def test_degenerate_range(self):
        ds = Dataset.from_rows([numeric("x")], [[0.4], [0.4]], [0, 1])
        assert ds.features[0].observed_min == ds.features[0].observed_max == 0.4

    def test_missing_ignored_in_range(self):
        ds = Dataset.from_rows([numeric("x")], [[None], [0.3], [0.9]], [0, 1, 0])
        assert (ds.features[0].observed_min, ds.features[0].observed_max) == (0.3, 0.9)

    def test_all_missing_numeric_column(self):
        with pytest.raises(DegenerateStatisticsError):
            Dataset.from_rows([numeric("x")], [[None], [None]], [0, 1])

    def test_empty_dataset(self):
        raw = Dataset((numeric("x"),), np.empty((0, 1)), np.empty(0, dtype=int), 2)
        with pytest.raises(DatasetError):
            compute_stats(raw)

    def test_absent_class_has_zero_prior(self):
        ds = Dataset.from_rows([numeric("x")], [[0.0], [1.0]], [0, 2], n_classes=3)
        np.testing.assert_array_equal(ds.class_priors, [0.5, 0.0, 0.5])


class TestValidation:
    def test_row_length_mismatch(self):
        with pytest.raises(DatasetError):
            Dataset((numeric("x"), numeric("y")), np.zeros((2, 3)), [0, 1], 2)

    def test_categoric_symbol_out_of_domain(self):
        with pytest.raises(DatasetError):
            Dataset.from_rows([categoric("c", 2)], [[0], [2]], [0, 1])

    def test_categoric_domain_at_least_two(self):
        with pytest.raises(DatasetError):
            FeatureMeta("c", "categoric", 1)

    def test_label_range(self):
        with pytest.raises(DatasetError):
            Dataset((numeric("x"),), np.zeros((2, 1)), [0, 2], 2)

    def test_immutable(self):
        ds = Dataset.from_rows([numeric("x")], [[0.0], [1.0]], [0, 1])
        with pytest.raises(ValueError):
            ds.values[0, 0] = 5.0
        with pytest.raises(AttributeError):
            ds.n_classes = 3


class TestConditionalTable:
    def test_frequencies(self):
        ds = Dataset.from_rows([categoric("c", 2)], [[0], [0], [1], [1]], [0, 0, 0, 1])
        table = class_conditional_table(ds, 0)
        np.testing.assert_allclose(table[0], [2 / 3, 1 / 3])
        np.testing.assert_allclose(table[1], [0.0, 1.0])

    def test_uniform(self):
        ds = Dataset.from_rows([categoric("c", 3)], [[0], [1], [2]], [0, 0, 0], n_classes=1)
        np.testing.assert_allclose(class_conditional_table(ds, 0)[0], [1 / 3] * 3)

    def test_missing_values_skipped(self):
        ds = Dataset.from_rows([categoric("c", 2)], [[None], [1], [0], [0]], [0, 0, 1, 1])
        np.testing.assert_allclose(class_conditional_table(ds, 0), [[0, 1], [1, 0]])

    def test_rows_sum_to_one(self, rng):
        vals = rng.integers(0, 4, size=(50, 1))
        labels = rng.integers(0, 3, size=50)
        ds = Dataset.from_rows([categoric("c", 4)], vals.tolist(), labels.tolist())
        np.testing.assert_allclose(class_conditional_table(ds, 0).sum(axis=1), 1.0, atol=1e-9)

    def test_class_without_known_values(self):
        ds = Dataset.from_rows([categoric("c", 2)], [[None], [1]], [0, 1])
        with pytest.raises(DegenerateStatisticsError):
            class_conditional_table(ds, 0)

    def test_numeric_feature_rejected(self):
        ds = Dataset.from_rows([numeric("x")], [[0.0], [1.0]], [0, 1])
        with pytest.raises(DegenerateStatisticsError):
            class_conditional_table(ds, 0)


class TestFiles:
    def test_round_trip(self, tmp_path):
        feats = [numeric("f0", True), categoric("f1", 3), numeric("f2")]
        rows = [[0.1, 2, 1e-17], [1 / 3, None, 5.5], [0.9, 0, -2.0]]
        ds = Dataset.from_rows(feats, rows, [0, 1, 1])
        csv_path, meta_path = write_dataset(ds, tmp_path / "toy.csv")
        assert meta_path == sidecar_path(csv_path) == tmp_path / "toy.meta.json"
        assert read_dataset(csv_path) == ds

    def test_file_layout(self, tmp_path):
        ds = Dataset.from_rows([numeric("f0", True), categoric("f1", 2)], [[0.5, None], [0.25, 1]], [1, 0])
        csv_path, meta_path = write_dataset(ds, tmp_path / "d.csv")
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "f0,f1,class"
        assert lines[1] == "0.5,,1"
        meta = json.loads(meta_path.read_text())
        assert meta == {
            "features": [
                {"name": "f0", "kind": "numeric", "relevant": True},
                {"name": "f1", "kind": "categoric", "relevant": False, "domainSize": 2},
            ],
            "classes": 2,
        }

    def test_without_sidecar_reads_numeric(self, tmp_path):
        path = tmp_path / "bare.csv"
        path.write_text("a,b,class\n1,2,0\n3,4,1\n")
        ds = read_dataset(path)
        assert all(f.is_numeric for f in ds.features)
        assert ds.n_classes == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_dataset(tmp_path / "nope.csv")

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(DatasetError):
            read_dataset(path)

    def test_sidecar_mismatch(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("a,b,class\n1,2,0\n")
        sidecar_path(path).write_text(json.dumps({"features": [{"name": "a", "kind": "numeric"}], "classes": 2}))
        with pytest.raises(DatasetError):
            read_dataset(path)

    def test_fingerprint_tracks_content(self):
        a = Dataset.from_rows([numeric("x")], [[0.0], [1.0]], [0, 1])
        b = Dataset.from_rows([numeric("x")], [[0.0], [1.0]], [0, 1])
        c = Dataset.from_rows([numeric("x")], [[0.0], [0.5]], [0, 1])
        assert a.fingerprint() == b.fingerprint() != c.fingerprint()
        assert math.isnan(Dataset.from_rows([categoric("c", 2)], [[None], [1]], [0, 1]).values[0, 0])

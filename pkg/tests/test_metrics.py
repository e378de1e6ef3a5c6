import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relieflab.data import Dataset, categoric, numeric
from relieflab.errors import DatasetError, UnsupportedValueError
from relieflab.metrics import (
    ProgressiveSchedule,
    area_ratio,
    c_progress,
    diff,
    diff_missing,
    diff_numeric,
    diff_overlap,
    diff_row,
    diff_tensor,
    distance_plain,
    distance_progressive,
    distance_weighted,
    f_progress,
)

from .oracles import simpson


class TestOverlap:
    def test_equal(self):
        assert diff_overlap(3, 3) == 0.0

    def test_different(self):
        assert diff_overlap(0, 1) == 1.0

    @given(st.integers(0, 9), st.integers(0, 9))
    def test_symmetric(self, a, b):
        assert diff_overlap(a, b) == diff_overlap(b, a)

    def test_missing_rejected(self):
        with pytest.raises(UnsupportedValueError):
            diff_overlap(math.nan, 1)

    def test_non_symbol_rejected(self):
        with pytest.raises(UnsupportedValueError):
            diff_overlap(0.5, 1)


class TestNumeric:
    meta = Dataset.from_rows([numeric("x")], [[0.0], [1.0]], [0, 1]).features[0]

    def test_half(self):
        assert diff_numeric(self.meta, 0.2, 0.7) == pytest.approx(0.5, abs=1e-15)

    def test_identity(self):
        assert diff_numeric(self.meta, 0.3, 0.3) == 0.0

    def test_degenerate_range(self):
        meta = Dataset.from_rows([numeric("x")], [[0.4], [0.4]], [0, 1]).features[0]
        assert diff_numeric(meta, 0.4, 0.4) == 0.0

    def test_clamped(self):
        assert diff_numeric(self.meta, -1.0, 3.0) == 1.0

    def test_needs_stats(self):
        with pytest.raises(DatasetError):
            diff_numeric(numeric("raw"), 0.1, 0.2)

    @given(st.floats(0, 1), st.floats(0, 1))
    def test_symmetric_and_bounded(self, a, b):
        d = diff_numeric(self.meta, a, b)
        assert d == diff_numeric(self.meta, b, a)
        assert 0.0 <= d <= 1.0


class TestMissing:
    @staticmethod
    def dataset():
        # class 0 known values: a, a, b -> P(a|0) = 2/3; class 1: a
        rows = [[None], [0], [0], [0], [1]]
        return Dataset.from_rows([categoric("c", 2)], rows, [0, 1, 0, 0, 0])

    def test_one_missing(self):
        ds = self.dataset()
        assert diff_missing(ds, 0, 0, 1) == pytest.approx(1 / 3, abs=1e-15)

    def test_certain_value(self):
        ds = Dataset.from_rows([categoric("c", 2)], [[None], [1], [1]], [0, 1, 0])
        assert diff_missing(ds, 0, 0, 1) == 0.0

    def test_second_missing_conditions_on_second_class(self):
        ds = self.dataset()
        # I2 missing (class 0), I1 value a -> 1 - P(a | class 0)
        assert diff_missing(ds, 0, 1, 0) == pytest.approx(1 / 3, abs=1e-15)

    def test_both_missing_point_mass(self):
        rows = [[None], [None], [1], [1]]
        ds = Dataset.from_rows([categoric("c", 2)], rows, [0, 1, 0, 1])
        assert diff_missing(ds, 0, 0, 1) == 0.0

    def test_both_missing_mixed(self):
        rows = [[None], [None], [0], [1], [0], [0]]
        ds = Dataset.from_rows([categoric("c", 2)], rows, [0, 1, 0, 0, 1, 1])
        # P(.|0) = [1/2, 1/2], P(.|1) = [1, 0] -> 1 - 1/2
        assert diff_missing(ds, 0, 0, 1) == pytest.approx(0.5)

    def test_numeric_missing_unsupported(self):
        ds = Dataset.from_rows([numeric("x")], [[None], [1.0], [0.0]], [0, 1, 0])
        with pytest.raises(UnsupportedValueError):
            diff(ds, 0, 0, 1)
        with pytest.raises(UnsupportedValueError):
            diff_row(ds, 0)

    def test_requires_a_missing_value(self):
        ds = self.dataset()
        with pytest.raises(UnsupportedValueError):
            diff_missing(ds, 0, 1, 2)


class TestDispatch:
    def test_routes(self):
        rows = [[0.2, 1, None], [0.7, 0, 1], [1.0, 1, 0], [0.0, 1, 1]]
        feats = [numeric("x"), categoric("c", 2), categoric("m", 2)]
        ds = Dataset.from_rows(feats, rows, [0, 1, 0, 1])
        assert diff(ds, 0, 0, 1) == diff_numeric(ds.features[0], 0.2, 0.7)
        assert diff(ds, 1, 0, 1) == diff_overlap(1, 0)
        assert diff(ds, 2, 0, 1) == diff_missing(ds, 2, 0, 1)

    def test_row_agrees_with_scalar(self, rng):
        rows = np.column_stack([rng.random(12), rng.integers(0, 3, 12)]).tolist()
        rows[3][1] = None
        rows[7][1] = None
        ds = Dataset.from_rows([numeric("x"), categoric("c", 3)], rows, [i % 3 for i in range(12)])
        tensor = diff_tensor(ds)
        for i in range(12):
            for j in range(12):
                for f in range(2):
                    assert tensor[i, j, f] == pytest.approx(diff(ds, f, i, j), abs=1e-15)


def _random_dataset(seed, n=8, n_num=2, n_cat=2):
    rng = np.random.default_rng(seed)
    rows = np.column_stack([rng.random((n, n_num)), rng.integers(0, 3, (n, n_cat))]).tolist()
    feats = [numeric(f"x{i}") for i in range(n_num)] + [categoric(f"c{i}", 3) for i in range(n_cat)]
    return Dataset.from_rows(feats, rows, rng.integers(0, 2, n).tolist(), n_classes=2)


class TestDistances:
    def test_identity(self, xor_dataset):
        assert distance_plain(xor_dataset, 0, 0) == 0.0

    def test_all_differ(self):
        ds = Dataset.from_rows([categoric(n, 2) for n in "abc"], [[0, 0, 0], [1, 1, 1]], [0, 1])
        assert distance_plain(ds, 0, 1) == 3.0

    def test_numeric_sum(self, numeric_pair):
        assert distance_plain(numeric_pair, 0, 1) == pytest.approx(0.75, abs=1e-15)

    def test_weighted_with_clamping(self):
        ds = Dataset.from_rows([categoric("a", 2), categoric("b", 2)], [[0, 0], [1, 1]], [0, 1])
        assert distance_weighted(ds, 0, 1, [0.5, 0.0]) == 0.5
        assert distance_weighted(ds, 0, 1, [0.5, -3.0]) == 0.5
        assert distance_weighted(ds, 0, 1, [0.0, 0.0]) == 0.0

    @given(st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_unit_weights_equal_plain_exactly(self, seed):
        ds = _random_dataset(seed)
        ones = np.ones(ds.n_features)
        for i in range(ds.n_instances):
            for j in range(ds.n_instances):
                assert distance_weighted(ds, i, j, ones) == distance_plain(ds, i, j)
                d = distance_plain(ds, i, j)
                assert 0.0 <= d <= ds.n_features

    def test_length_mismatch(self, xor_dataset):
        with pytest.raises(ValueError):
            distance_weighted(xor_dataset, 0, 1, [1.0])

    def test_progressive_start_is_plain(self):
        ds = _random_dataset(3)
        sched = ProgressiveSchedule(0.06, 2.0, 10)
        w = np.array([0.3, -0.2, 0.9, 0.1])
        for j in range(ds.n_instances):
            assert distance_progressive(ds, 0, j, w, 0, sched) == distance_plain(ds, 0, j)
            assert distance_progressive(ds, 0, j, np.ones(4), 7, sched) == distance_plain(ds, 0, j)

    def test_progressive_small_s_approaches_weighted(self):
        ds = _random_dataset(4)
        w = np.array([0.3, -0.2, 0.9, 0.1])
        sched = ProgressiveSchedule(1e-9, 2.0, 10)
        for j in range(ds.n_instances):
            assert distance_progressive(ds, 0, j, w, 10, sched) == pytest.approx(
                distance_weighted(ds, 0, j, w), abs=1e-7
            )


class TestSchedule:
    def test_invalid(self):
        for kwargs in ({"s": 0}, {"a": -1}, {"m": 0}):
            with pytest.raises(ValueError):
                ProgressiveSchedule(**kwargs)

    def test_c_endpoints(self):
        sched = ProgressiveSchedule(0.06, 2.0, 10)
        assert c_progress(0, sched) == 0.0
        assert c_progress(10, sched) == 1.0
        assert c_progress(5, sched) == 0.25

    def test_f_at_zero_is_one(self):
        sched = ProgressiveSchedule(0.06, 2.0, 10)
        for w in (-1.0, 0.0, 0.5, 3.0):
            assert f_progress(w, 0, sched) == 1.0

    def test_f_at_end(self):
        sched = ProgressiveSchedule(0.06, 2.0, 10)
        # (0.5 - 1) * 1 / 1.06 + 1
        assert f_progress(0.5, 10, sched) == pytest.approx(0.5283018867924528, abs=1e-12)

    @given(st.floats(0, 50), st.floats(0.001, 5), st.floats(0.5, 4))
    def test_f_fixed_point(self, t, s, a):
        sched = ProgressiveSchedule(s, a, 50)
        assert f_progress(1.0, t, sched) == 1.0

    @given(st.floats(-2, 3, allow_nan=False), st.floats(0.001, 2), st.floats(0.5, 4), st.integers(2, 200))
    def test_f_monotone_in_t(self, w, s, a, m):
        sched = ProgressiveSchedule(s, a, m)
        vals = np.array([f_progress(w, t, sched) for t in range(m + 1)])
        steps = np.diff(vals)
        if w < 1:
            assert np.all(steps <= 1e-12)
        elif w > 1:
            assert np.all(steps >= -1e-12)
        else:
            assert np.all(vals == 1.0)

    @given(st.floats(-2, 3, allow_nan=False), st.floats(0.001, 2), st.floats(0.5, 4), st.integers(1, 200))
    def test_terminal_closeness(self, w, s, a, m):
        sched = ProgressiveSchedule(s, a, m)
        assert abs(f_progress(w, m, sched) - w) <= abs(1 - w) * s / (1 + s) + 1e-12


class TestAreaRatio:
    def test_published_parameters(self):
        sched = ProgressiveSchedule(0.0633657, 2.0, 100_000)
        assert area_ratio(sched) == pytest.approx(1 / 3, abs=1e-3)

    def test_against_independent_quadrature(self):
        sched = ProgressiveSchedule(0.0633657, 2.0, 1000)
        w = 0.5
        f = lambda t: (w - 1) * (t / 1000) ** 2 / ((t / 1000) ** 2 + 0.0633657) + 1  # noqa: E731
        expected = (simpson(f, 1, 1000, 20_000) - w * 999) / (999 - w * 999)
        assert area_ratio(sched, w) == pytest.approx(expected, abs=1e-6)
        # closed form of the same integral
        rs = math.sqrt(0.0633657)
        closed = rs * (math.atan(1 / rs) - math.atan(1 / 1000 / rs)) * 1000 / 999
        assert area_ratio(sched, w) == pytest.approx(closed, abs=1e-6)

    def test_boundaries(self):
        sched = ProgressiveSchedule(0.06, 2.0, 100)
        assert area_ratio(sched, 0.5, f=lambda w, t: np.ones_like(t)) == pytest.approx(1.0, abs=1e-12)
        assert area_ratio(sched, 0.5, f=lambda w, t: np.full_like(t, w)) == pytest.approx(0.0, abs=1e-12)

    def test_independent_of_reference_weight(self):
        sched = ProgressiveSchedule(0.0633657, 2.0, 500)
        assert abs(area_ratio(sched, 0.2) - area_ratio(sched, 0.8)) < 1e-9

    def test_degenerate_m(self):
        with pytest.raises(ValueError):
            area_ratio(ProgressiveSchedule(0.06, 2.0, 1))

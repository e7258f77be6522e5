import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alstm.config import _resolve_path
from alstm.exceptions import ConfigError
from alstm.ingest import CsvSpec, clean_missing, downsample, load_series, load_series_csv, write_series_csv

FIXTURE = _resolve_path("builtin:household_power_fixture.csv", ".")


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


class TestLoad:
    def test_missing_marker(self, tmp_path):
        path = write(tmp_path, "1.0\n?\n2.0\n")
        raw = load_series_csv(CsvSpec(path, delimiter=",", column=0, header=False))
        assert raw[0] == 1.0 and np.isnan(raw[1]) and raw[2] == 2.0

    def test_unparseable_cell_is_missing(self, tmp_path):
        path = write(tmp_path, "v\n1\nabc\n3\n")
        raw = load_series_csv(CsvSpec(path, delimiter=",", column="v"))
        assert np.isnan(raw[1])

    def test_semicolon_named_column(self, tmp_path):
        path = write(tmp_path, "Date;Time;Global_active_power\n1/1/2007;00:00:00;4.216\n1/1/2007;00:01:00;5.360\n")
        np.testing.assert_array_equal(load_series_csv(CsvSpec(path)), [4.216, 5.360])

    def test_fixture_length(self):
        with open(FIXTURE) as fh:
            rows = sum(1 for _ in fh) - 1
        assert rows == 7000
        assert len(load_series_csv(CsvSpec(FIXTURE))) == rows

    def test_absent_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_series_csv(CsvSpec(str(tmp_path / "nope.csv")))

    def test_absent_column(self, tmp_path):
        with pytest.raises(KeyError):
            load_series_csv(CsvSpec(write(tmp_path, "a;b\n1;2\n"), column="c"))

    def test_no_rows(self, tmp_path):
        with pytest.raises(ValueError):
            load_series_csv(CsvSpec(write(tmp_path, "a;b\n"), column="a"))

    def test_max_rows(self):
        assert len(load_series_csv(CsvSpec(FIXTURE, max_rows=10))) == 10

    def test_bad_factor(self):
        with pytest.raises(ConfigError):
            CsvSpec("x", downsample=0)


class TestClean:
    def test_forward_fill(self):
        np.testing.assert_array_equal(clean_missing([1.0, np.nan, 2.0]).values, [1.0, 1.0, 2.0])
        np.testing.assert_array_equal(clean_missing([1, np.nan, np.nan, 4]).values, [1, 1, 1, 4])

    def test_identity_without_gaps(self):
        np.testing.assert_array_equal(clean_missing([3.0, 1.0]).values, [3.0, 1.0])

    @pytest.mark.parametrize("raw", [[np.nan, 1.0], [np.nan, np.nan], []])
    def test_errors(self, raw):
        with pytest.raises(ValueError):
            clean_missing(raw)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.one_of(st.floats(-10, 10), st.just(float("nan"))), min_size=1, max_size=40))
    def test_no_markers_remain(self, values):
        values = [1.0] + values
        out = clean_missing(values).values
        assert len(out) == len(values) and not np.any(np.isnan(out))


class TestDownsample:
    def test_examples(self):
        np.testing.assert_array_equal(downsample(np.array([1.0, 2, 3, 4]), 1).values, [1, 2, 3, 4])
        np.testing.assert_array_equal(downsample(np.array([1.0, 2, 3, 4]), 2).values, [1.5, 3.5])
        np.testing.assert_array_equal(downsample(np.array([1.0, 2, 3]), 2).values, [1.5])

    def test_bad_factor(self):
        with pytest.raises(ValueError):
            downsample(np.ones(3), 0)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-1e3, 1e3), min_size=0, max_size=60), st.integers(1, 7))
    def test_length_and_block_bounds(self, values, k):
        v = np.array(values, dtype=float)
        out = downsample(v, k).values
        assert len(out) == len(v) // k
        for j, mean in enumerate(out):
            block = v[j * k:(j + 1) * k]
            assert block.min() - 1e-9 <= mean <= block.max() + 1e-9


def test_pipeline_is_deterministic():
    a = load_series(CsvSpec(FIXTURE, downsample=3))
    b = load_series(CsvSpec(FIXTURE, downsample=3))
    np.testing.assert_array_equal(a.values, b.values)
    assert len(a) == 7000 // 3 and not np.any(np.isnan(a.values))


def test_write_series_csv(tmp_path):
    path = tmp_path / "s.csv"
    write_series_csv(path, np.array([0.5, 1.25]), header_comment="x")
    assert path.read_text() == "# spec: x\nindex,value\n0,0.5\n1,1.25\n"

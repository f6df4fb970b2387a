import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polymc import DataError, MaskedMatrix, read_masked_csv, write_completed_csv, write_masked_csv


class TestMaskedMatrix:
    def test_from_array_nan_sentinel(self):
        arr = np.array([[1.0, np.nan], [3.0, 4.0]])
        masked = MaskedMatrix.from_array(arr)
        assert masked.n_missing == 1
        assert not masked.mask[0, 1]
        assert masked.filled(9.0)[0, 1] == 9.0

    def test_column_mean_filled(self):
        arr = np.array([[1.0, np.nan], [3.0, np.nan]])
        masked = MaskedMatrix.from_array(arr)
        filled = masked.column_mean_filled()
        assert filled[0, 1] == 0.0  # empty column falls back to zero
        arr2 = np.array([[1.0, 2.0], [np.nan, 4.0]])
        assert MaskedMatrix.from_array(arr2).column_mean_filled()[1, 0] == 1.0

    def test_validation(self):
        with pytest.raises(DataError):
            MaskedMatrix(np.ones((2, 2)), np.ones((2, 3), dtype=bool))
        with pytest.raises(DataError):
            MaskedMatrix(np.full((2, 2), np.nan), np.ones((2, 2), dtype=bool))
        with pytest.raises(DataError):
            MaskedMatrix(np.ones((2, 2)), np.zeros((2, 2), dtype=bool))
        with pytest.raises(DataError):
            MaskedMatrix(np.ones(4), np.ones(4, dtype=bool))


class TestReadMaskedCsv:
    def test_trailing_missing_cell(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2\n3,\n")
        masked = read_masked_csv(path)
        assert masked.shape == (2, 2)
        assert masked.mask.tolist() == [[True, True], [True, False]]
        assert masked.values[0, 1] == 2.0

    def test_all_present(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2\n3,4\n")
        assert read_masked_csv(path).mask.all()

    def test_nan_token_case_insensitive(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,NaN\nnan,4\n")
        masked = read_masked_csv(path)
        assert masked.n_missing == 2

    def test_custom_missing_token(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,?\n3,4\n")
        masked = read_masked_csv(path, missing_token="?")
        assert masked.n_missing == 1

    def test_ragged_row_coordinates(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2\n3\n")
        with pytest.raises(DataError, match="row 2"):
            read_masked_csv(path)

    def test_unparsable_cell_coordinates(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2\nfoo,4\n")
        with pytest.raises(DataError, match=r"\(2,1\)"):
            read_masked_csv(path)

    def test_infinite_cell_rejected(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,inf\n")
        with pytest.raises(DataError, match=r"\(1,2\)"):
            read_masked_csv(path)

    def test_all_missing_rejected(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text(",\n,\n")
        with pytest.raises(DataError, match="missing"):
            read_masked_csv(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("")
        with pytest.raises(DataError):
            read_masked_csv(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            read_masked_csv(tmp_path / "nope.csv")


class TestRoundTrip:
    @settings(max_examples=50, deadline=None)
    @given(
        cells=st.lists(
            st.lists(
                st.one_of(
                    st.none(),
                    st.floats(allow_nan=False, allow_infinity=False, width=64),
                ),
                min_size=3,
                max_size=3,
            ),
            min_size=1,
            max_size=5,
        )
    )
    def test_write_read_identity(self, cells, tmp_path_factory):
        values = np.array([[0.0 if c is None else c for c in row] for row in cells])
        mask = np.array([[c is not None for c in row] for row in cells])
        if not mask.any():
            return
        masked = MaskedMatrix(values, mask)
        path = tmp_path_factory.mktemp("csv") / "round.csv"
        write_masked_csv(masked, path)
        back = read_masked_csv(path)
        assert np.array_equal(back.mask, masked.mask)
        assert np.array_equal(back.values[back.mask], masked.values[masked.mask])

    def test_seventeen_digit_round_trip(self, tmp_path):
        values = np.array([[np.pi, 1.0 / 3.0, 1e-300]])
        masked = MaskedMatrix(values, np.ones((1, 3), dtype=bool))
        path = tmp_path / "pi.csv"
        write_masked_csv(masked, path)
        assert np.array_equal(read_masked_csv(path).values, values)


class TestWriteCompleted:
    def test_no_missing_tokens(self, tmp_path):
        path = tmp_path / "done.csv"
        write_completed_csv(np.array([[1.5, 2.5], [3.5, 4.5]]), path)
        text = path.read_text()
        assert ",," not in text and "nan" not in text.lower()
        back = read_masked_csv(path)
        assert back.mask.all()

    def test_rejects_non_finite(self, tmp_path):
        with pytest.raises(DataError):
            write_completed_csv(np.array([[1.0, np.nan]]), tmp_path / "x.csv")

    def test_write_error_surfaces_path(self, tmp_path):
        target = tmp_path / "no" / "such" / "dir" / "x.csv"
        with pytest.raises(DataError, match="x.csv"):
            write_completed_csv(np.ones((1, 1)), target)
        with pytest.raises(DataError, match="x.csv"):
            write_masked_csv(MaskedMatrix(np.ones((1, 1)), np.ones((1, 1), dtype=bool)), target)

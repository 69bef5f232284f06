import numpy as np
import pytest

from bayeslasso.data import (
    Dataset,
    RegressionData,
    load_csv,
    standardize,
    synth_regression,
    write_csv,
)
from bayeslasso.exceptions import DataFormatError, ParameterError


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadCsv:
    def test_toy_with_header(self, tmp_path):
        path = write(tmp_path, "y,a,b\n1,2,3\n4,5,6\n7,8,9\n")
        ds = load_csv(path, "y")
        assert ds.n == 3 and ds.p0 == 2
        assert ds.column_names == ["a", "b"]
        assert np.array_equal(ds.y_raw, [1.0, 4.0, 7.0])
        assert np.array_equal(ds.X_raw, [[2, 3], [5, 6], [8, 9]])

    def test_headerless_by_index(self, tmp_path):
        path = write(tmp_path, "1,2\n3,4\n")
        ds = load_csv(path, 1)
        assert np.array_equal(ds.y_raw, [2.0, 4.0])
        assert ds.column_names == ["x1"]

    def test_missing_cell_drops_row(self, tmp_path):
        path = write(tmp_path, "y,a\n1,2\n3,\n5,6\n")
        with pytest.warns(UserWarning, match="dropped 1 row"):
            ds = load_csv(path, "y")
        assert ds.n == 2
        assert np.array_equal(ds.y_raw, [1.0, 5.0])

    def test_non_numeric_cell_is_parse_error(self, tmp_path):
        path = write(tmp_path, "y,a\n1,2\n3,oops\n")
        with pytest.raises(DataFormatError, match="row 3.*'a'"):
            load_csv(path, "y")

    def test_unknown_response(self, tmp_path):
        path = write(tmp_path, "y,a\n1,2\n")
        with pytest.raises(ParameterError, match="not found"):
            load_csv(path, "z")

    def test_ragged_rows(self, tmp_path):
        path = write(tmp_path, "y,a\n1,2\n3\n")
        with pytest.raises(DataFormatError, match="row 3"):
            load_csv(path, "y")

    def test_alternate_delimiter(self, tmp_path):
        path = write(tmp_path, "y;a\n1;2\n3;4\n")
        ds = load_csv(path, "y", delimiter=";")
        assert ds.n == 2 and ds.p0 == 1

    def test_round_trip_bit_exact(self, tmp_path):
        ds = synth_regression(20, 3, np.array([0.3, -1.7, 2.9]), 0.7, seed=8)
        out = tmp_path / "rt.csv"
        write_csv(ds, out)
        back = load_csv(out, "y")
        assert np.array_equal(back.y_raw, ds.y_raw)
        assert np.array_equal(back.X_raw, ds.X_raw)
        assert back.column_names == ds.column_names


class TestStandardize:
    def toy(self):
        return Dataset(
            name="toy",
            y_raw=np.array([1.0, 2.0, 6.0]),
            X_raw=np.array([[1.0, 10.0], [2.0, 30.0], [3.0, 20.0]]),
            column_names=["a", "b"],
        )

    def test_unit_column(self):
        data = standardize(self.toy())
        assert np.allclose(data.X[:, 0], [-1.0, 0.0, 1.0], atol=1e-14)
        assert abs(data.y.mean()) < 1e-12

    def test_columns_centered_unit_sd(self):
        ds = synth_regression(200, 6, np.zeros(6), 1.0, seed=1)
        ds.X_raw = ds.X_raw * np.array([1, 5, 0.1, 40, 2, 7]) + 3.0
        data = standardize(ds, interactions="pairs")
        assert np.all(np.abs(data.X.mean(axis=0)) < 1e-10)
        assert np.all(np.abs(data.X.std(axis=0, ddof=1) - 1.0) < 1e-10)

    def test_pairwise_interaction_count(self):
        ds = synth_regression(60, 10, np.zeros(10), 1.0, seed=2)
        assert standardize(ds, interactions="pairs").p == 55
        assert standardize(ds, interactions="pairs+squares").p == 65
        assert standardize(ds).p == 10

    def test_interaction_names(self):
        data = standardize(self.toy(), interactions="pairs+squares")
        assert data.column_names == ["a", "b", "a*b", "a^2", "b^2"]

    def test_constant_column_dropped(self):
        ds = self.toy()
        ds.X_raw = np.column_stack([ds.X_raw, np.full(3, 7.0)])
        ds.column_names = ["a", "b", "const"]
        with pytest.warns(UserWarning, match="const"):
            data = standardize(ds)
        assert data.p == 2 and "const" not in data.column_names

    def test_idempotent(self):
        data = standardize(self.toy(), interactions="pairs")
        again = standardize(
            Dataset("toy2", data.y.copy(), data.X.copy(), list(data.column_names))
        )
        assert np.allclose(again.X, data.X, atol=1e-12)
        assert np.allclose(again.y, data.y, atol=1e-12)

    def test_gram_consistency(self):
        data = standardize(synth_regression(50, 4, np.zeros(4), 1.0, seed=3))
        assert np.allclose(data.XtX, data.X.T @ data.X, rtol=1e-10)
        assert np.allclose(data.Xty, data.X.T @ data.y, rtol=1e-10)
        assert data.y_sq_norm == pytest.approx(float(data.y @ data.y), rel=1e-12)
        assert np.allclose(data.col_sq_norms, (data.X ** 2).sum(axis=0), rtol=1e-12)

    def test_too_few_rows(self):
        ds = Dataset("tiny", np.array([1.0]), np.array([[1.0]]), ["a"])
        with pytest.raises(DataFormatError):
            standardize(ds)

    def test_bad_rule(self):
        with pytest.raises(ParameterError):
            standardize(self.toy(), interactions="cubes")


class TestSynthRegression:
    def test_deterministic(self):
        a = synth_regression(30, 3, np.ones(3), 1.0, seed=4)
        b = synth_regression(30, 3, np.ones(3), 1.0, seed=4)
        assert np.array_equal(a.X_raw, b.X_raw) and np.array_equal(a.y_raw, b.y_raw)

    def test_noise_only_variance(self):
        ds = synth_regression(40_000, 2, np.zeros(2), 1.0, seed=5)
        se = math_sqrt2 = (2.0 / (ds.n - 1)) ** 0.5
        assert abs(ds.y_raw.var(ddof=1) - 1.0) < 4 * se

    def test_ols_recovery(self):
        ds = synth_regression(10_000, 2, np.array([1.0, -1.0]), 1.0, seed=6)
        coef, *_ = np.linalg.lstsq(ds.X_raw, ds.y_raw, rcond=None)
        assert np.all(np.abs(coef - [1.0, -1.0]) < 4.0 / np.sqrt(ds.n))

    def test_correlated_design(self):
        ds = synth_regression(20_000, 3, np.zeros(3), 1.0, design="correlated",
                              seed=7, rho=0.6)
        corr = np.corrcoef(ds.X_raw.T)
        assert abs(corr[0, 1] - 0.6) < 0.03 and abs(corr[0, 2] - 0.36) < 0.03

    def test_validation(self):
        with pytest.raises(ParameterError):
            synth_regression(0, 2, np.zeros(2), 1.0)
        with pytest.raises(ParameterError):
            synth_regression(5, 2, np.zeros(3), 1.0)
        with pytest.raises(ParameterError):
            synth_regression(5, 2, np.zeros(2), -1.0)
        with pytest.raises(ParameterError):
            synth_regression(5, 2, np.zeros(2), 1.0, design="bogus")


class TestRegressionData:
    def test_from_matrix_shapes(self):
        with pytest.raises(DataFormatError):
            RegressionData.from_matrix(np.zeros((3, 2)), np.zeros(4))

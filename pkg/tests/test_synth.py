import numpy as np
import pytest

from nowcastml.errors import BadDgp
from nowcastml.frame import deflate, load_csv, write_csv
from nowcastml.numeric import solve_least_squares
from nowcastml.synth import INDICATORS, DgpSpec, generate_synthetic


class TestGenerateSynthetic:
    def test_deterministic_frames_and_files(self, tmp_path):
        a, truth_a = generate_synthetic(42, 64)
        b, truth_b = generate_synthetic(42, 64)
        assert truth_a == truth_b
        for name in a.column_names:
            assert np.array_equal(a.column(name), b.column(name))
        pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(a, pa)
        write_csv(b, pb)
        assert pa.read_bytes() == pb.read_bytes()

    def test_different_seed_differs(self):
        a, _ = generate_synthetic(1, 32)
        b, _ = generate_synthetic(2, 32)
        assert not np.array_equal(a.target, b.target)

    def test_shape_and_schema(self):
        frame, truth = generate_synthetic(42, 64)
        assert len(frame) == 64
        assert len(frame.columns) == 12  # GDP + 10 indicators + CPI
        assert frame.column_names == ["GDP", *INDICATORS, "CPI"]
        assert str(frame.index[0]) == "2007Q1"
        assert str(frame.index[-1]) == "2022Q4"
        assert truth["target"] == "GDP"

    def test_strictly_positive_columns(self):
        frame, _ = generate_synthetic(3, 100)
        for name in frame.column_names:
            assert np.all(frame.column(name) > 0), name

    def test_deflation_recovers_real_series(self):
        frame, truth = generate_synthetic(5, 40)
        base = frame.index[0]
        real = deflate(frame, "CPI", base, truth["nominal_columns"])
        # re-inflating the recovered series reproduces the stored nominal one
        cpi = frame.column("CPI")
        for name in truth["nominal_columns"]:
            again = real.column(name) * cpi / cpi[0]
            assert np.allclose(again, frame.column(name), rtol=1e-12)

    def test_noiseless_dgp_recovered_by_ols(self):
        frame, truth = generate_synthetic(7, 48, DgpSpec(noise_sd=0.0))
        real = deflate(frame, "CPI", frame.index[0], truth["nominal_columns"])
        X = real.feature_matrix(list(INDICATORS))
        dummies = np.column_stack(
            [[1.0 if q.quarter == k else 0.0 for q in frame.index] for k in (2, 3, 4)]
        )
        design = np.column_stack([np.ones(len(frame)), X, dummies])
        beta = solve_least_squares(design, frame.target)
        true_coef = np.array([truth["coefficients"][n] for n in INDICATORS])
        assert np.max(np.abs(beta[1:11] - true_coef)) < 1e-6
        assert abs(beta[0] - truth["intercept"]) < 1e-6
        assert np.max(np.abs(beta[11:] - np.array(truth["seasonal"][1:]))) < 1e-6

    def test_csv_round_trip(self, tmp_path):
        frame, _ = generate_synthetic(11, 28)
        path = tmp_path / "synthetic.csv"
        write_csv(frame, path)
        back = load_csv(path, "GDP")
        for name in frame.column_names:
            assert np.array_equal(back.column(name), frame.column(name))

    def test_too_few_quarters(self):
        with pytest.raises(BadDgp):
            generate_synthetic(1, 23)

    def test_bad_autocorrelation(self):
        with pytest.raises(BadDgp):
            DgpSpec(autocorr={name: 1.5 for name in INDICATORS})

    def test_bad_coefficient_keys(self):
        with pytest.raises(BadDgp):
            DgpSpec(coefficients={"ELEC": 1.0})

    def test_negative_noise(self):
        with pytest.raises(BadDgp):
            DgpSpec(noise_sd=-1.0)

#!/usr/bin/env python3
"""
Tests for configuration handling, the command implementations and the entry point
"""

import json
import math
import os

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from cli import build_config, parse_config_file
from cli.commands import builtin_input, evaluation_points, parse_coefficients
from cli.config import RunConfig
from main import main
from models import ConfigError
from numerics.calibration import read_table


def read_report(path):
    return pd.read_csv(path, comment="#")


class TestConfig:
    def test_parse_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("n = 2\n# comment\n\nalpha=1,0\nwith-kernel=yes\ndegree=none\n")
        values = parse_config_file(str(path))
        assert values == {"n": 2, "alpha": "1,0", "with_kernel": True, "degree": None}

    def test_unknown_key_reports_line(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("n=1\n\nbogus=3\n")
        with pytest.raises(ConfigError) as exc_info:
            parse_config_file(str(path))
        assert exc_info.value.line == 3
        assert exc_info.value.source == str(path)

    def test_bad_value_reports_line(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("seed=abc\n")
        with pytest.raises(ConfigError) as exc_info:
            parse_config_file(str(path))
        assert exc_info.value.line == 1

    def test_overrides_win(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("n=2\nalpha=1,0\nseed=3\n")
        config = build_config(str(path), {"n": None, "seed": 5})
        assert config.n == 2
        assert config.seed == 5
        assert config.multi_index() == (1, 0)

    def test_validation(self):
        with pytest.raises(ConfigError):
            RunConfig(n=4)
        with pytest.raises(ConfigError):
            RunConfig(n=1, alpha="1,0")
        with pytest.raises(ConfigError):
            RunConfig(n=3, degree=17)
        with pytest.raises(ConfigError):
            RunConfig(family="halfpower-derivative")
        with pytest.raises(ConfigError):
            RunConfig(eps_inner=0.0).pv_config()

    def test_experiment_config(self):
        config = RunConfig(n=2, alpha="2,0", family="new", samples=10, route="local")
        experiment = config.experiment_config()
        assert experiment.dim == 2
        assert experiment.alpha == (2, 0)
        assert experiment.family.value == "new"
        assert experiment.pv.eps_outer == pytest.approx(2e-5)


class TestInputs:
    def test_parse_coefficients(self):
        f = parse_coefficients("2:0=1.5;0:1=-0.25", 2)
        assert f[(2, 0)] == 1.5
        assert f[(0, 1)] == -0.25
        assert len(f) == 2

    @pytest.mark.parametrize("text", ["2:0", "2:0=x", "1=1.0"])
    def test_bad_coefficients(self, text):
        with pytest.raises(ConfigError):
            parse_coefficients(text, 2)

    def test_builtin_inputs(self):
        assert builtin_input("h1:0", 2, None)[(1, 0)] == 1.0
        with pytest.raises(ConfigError):
            builtin_input("h1", 2, None)
        with pytest.raises(ConfigError):
            builtin_input("gauss", 1, None)

    def test_bump_has_mean_zero(self):
        f = builtin_input("bump", 1, 20)
        assert f.degree() <= 20
        assert abs(f[(0,)]) <= 1e-12 * f.norm()

    def test_default_points(self):
        points = evaluation_points(RunConfig(n=2))
        assert points.shape == (9, 2)
        assert_allclose(np.linalg.norm(points[0]), 2.0)

    def test_explicit_points(self):
        points = evaluation_points(RunConfig(n=2, points="0.5,1;-1,0"))
        assert points.tolist() == [[0.5, 1.0], [-1.0, 0.0]]
        with pytest.raises(ConfigError):
            evaluation_points(RunConfig(n=2, points="0.5"))


class TestMain:
    def test_transform_old_h1(self, tmp_path):
        assert main(["transform", "--alpha", "1", "--input", "h1", "--out", str(tmp_path)]) == 0
        frame = read_report(tmp_path / "transform.csv")
        assert list(frame.columns) == ["x0", "input", "spectral"]
        assert_allclose(frame["spectral"], np.ones(9), atol=1e-12)

    def test_transform_new_h0(self, tmp_path):
        code = main(["transform", "--family", "new", "--alpha", "1", "--input", "h0",
                     "--points", "0.5;-1;2", "--out", str(tmp_path)])
        assert code == 0
        frame = read_report(tmp_path / "transform.csv")
        assert_allclose(frame["spectral"], math.sqrt(2.0) * frame["x0"], atol=1e-12)

    def test_transform_metadata(self, tmp_path):
        main(["transform", "--alpha", "1", "--coeffs", "3=1", "--out", str(tmp_path)])
        with open(tmp_path / "transform.csv") as f:
            header = [line for line in f if line.startswith("#")]
        assert "# command: transform\n" in header
        assert any(line.startswith("# generated:") for line in header)

    def test_missing_alpha_is_usage_error(self, tmp_path):
        assert main(["transform", "--input", "h1", "--out", str(tmp_path)]) == 64

    def test_unknown_experiment_is_usage_error(self, tmp_path):
        assert main(["verify", "nope", "--out", str(tmp_path)]) == 64

    def test_bad_flag_is_usage_error(self):
        assert main(["verify", "geometry", "--bogus"]) == 64

    def test_bad_config_file_is_usage_error(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("bogus=1\n")
        assert main(["verify", "geometry", "--config", str(path), "--out", str(tmp_path)]) == 64

    def test_verify_geometry(self, tmp_path):
        code = main(["verify", "geometry", "--n", "2", "--samples", "300", "--out", str(tmp_path)])
        assert code == 0
        frame = read_report(tmp_path / "geometry.csv")
        assert len(frame) == 300
        assert {"index", "violation", "ratio", "r_By"} <= set(frame.columns)
        with open(tmp_path / "geometry.json") as f:
            summary = json.load(f)
        assert summary["passed"] is True
        assert summary["samples"] == 300
        assert not os.path.exists(tmp_path / "summary.json")

    def test_calibrate_writes_table(self, tmp_path, monkeypatch):
        monkeypatch.setattr("numerics.calibration.RESIDUAL_THRESHOLD", 1.0)
        assert main(["calibrate", "--alpha", "1", "--out", str(tmp_path)]) == 0
        record = read_table(str(tmp_path / "calibration.txt"))[(1, "1", "old")]
        assert not record.flagged
        assert record.constant == pytest.approx(record.reference, rel=1e-2)

    def test_calibrate_warning_exit(self, tmp_path, monkeypatch):
        monkeypatch.setattr("numerics.calibration.RESIDUAL_THRESHOLD", 0.0)
        path = tmp_path / "tables" / "calibration.txt"
        code = main(["calibrate", "--alpha", "1", "--calibration", str(path), "--out", str(tmp_path)])
        assert code == 2
        assert "status=warning" in path.read_text()

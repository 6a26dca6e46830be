import json

import pytest

from nowcastml.cli import main

CONFIG_TEMPLATE = """
[data]
path = {data}
target = GDP
cpi = CPI

[run]
seed = 42
families = ridge, lasso, knn
out = {out}

[scenario late]
train_end = 2021Q4
test_start = 2022Q1
test_end = 2022Q4

[grid ridge]
lambda = 0.01, 1

[grid lasso]
lambda = 0.01, 1

[grid knn]
k = 3, 5
"""


@pytest.fixture()
def workspace(tmp_path):
    data = tmp_path / "synthetic.csv"
    out = tmp_path / "out"
    config = tmp_path / "run.ini"
    config.write_text(CONFIG_TEMPLATE.format(data=data, out=out))
    assert main(["synth", "--seed", "42", "--quarters", "64", "--out", str(data)]) == 0
    return tmp_path, data, out, config


class TestSynthCommand:
    def test_writes_csv_and_truth(self, tmp_path, capsys):
        out = tmp_path / "d.csv"
        assert main(["synth", "--seed", "1", "--quarters", "32", "--out", str(out)]) == 0
        assert out.exists()
        truth = json.loads((tmp_path / "d.csv.truth.json").read_text())
        assert truth["seed"] == 1
        assert truth["n_quarters"] == 32
        header = out.read_text().splitlines()[0]
        assert header.startswith("quarter,GDP,")

    def test_identical_seed_identical_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["synth", "--seed", "9", "--quarters", "24", "--out", str(a)])
        main(["synth", "--seed", "9", "--quarters", "24", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_bad_quarters_fails_cleanly(self, tmp_path, capsys):
        code = main(["synth", "--quarters", "4", "--out", str(tmp_path / "x.csv")])
        assert code == 2
        assert "error" in capsys.readouterr().err


class TestRunCommand:
    def test_run_one_scenario(self, workspace, capsys):
        _, _, out, config = workspace
        assert main(["run", "--config", str(config), "--scenario", "late"]) == 0
        for stem in ("metrics", "predictions", "pct_errors", "weights"):
            assert (out / f"{stem}_late.csv").exists()

    def test_scenarios_runs_all(self, workspace):
        _, _, out, config = workspace
        assert main(["scenarios", "--config", str(config)]) == 0
        assert (out / "metrics_late.csv").exists()

    def test_unknown_scenario_fails(self, workspace, capsys):
        _, _, _, config = workspace
        assert main(["run", "--config", str(config), "--scenario", "nope"]) == 2
        assert "error" in capsys.readouterr().err

    def test_weights_on_test_flag(self, workspace, capsys):
        _, _, out, config = workspace
        code = main(
            ["run", "--config", str(config), "--scenario", "late", "--weights-on-test"]
        )
        assert code == 0
        captured = capsys.readouterr()
        assert "test-set MSE" in captured.err
        weights = (out / "weights_late.csv").read_text()
        assert weights.startswith("# warning")
        assert "test_mse" in weights

    def test_emit_cv_flag(self, workspace):
        _, _, out, config = workspace
        assert main(["run", "--config", str(config), "--scenario", "late", "--emit-cv"]) == 0
        assert (out / "cv_late_ridge.csv").exists()

    def test_out_override(self, workspace, tmp_path):
        _, _, _, config = workspace
        other = tmp_path / "elsewhere"
        assert main(
            ["run", "--config", str(config), "--scenario", "late", "--out", str(other)]
        ) == 0
        assert (other / "metrics_late.csv").exists()


class TestEvaluateCommand:
    def test_metrics_from_predictions(self, workspace, capsys):
        _, _, out, config = workspace
        main(["run", "--config", str(config), "--scenario", "late"])
        capsys.readouterr()
        assert main(["evaluate", "--predictions", str(out / "predictions_late.csv")]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "model,rmse,mae,mape"
        names = [line.split(",")[0] for line in lines[1:]]
        assert "Ridge" in names and "Ensemble Model" in names and "AR(4)" in names

    def test_rejects_other_files(self, workspace, capsys):
        path, _, _, config = workspace
        bad = path / "junk.csv"
        bad.write_text("a,b\n1,2\n")
        assert main(["evaluate", "--predictions", str(bad)]) == 2


class TestInspectFolds:
    def test_prints_plan(self, capsys):
        assert main(["inspect-folds", "--n-train", "48"]) == 0
        out = capsys.readouterr().out
        assert "n_train=48 folds=5 horizon=4" in out
        assert "train [0, 28)" in out and "validate [44, 48)" in out

    def test_too_short_errors(self, capsys):
        assert main(["inspect-folds", "--n-train", "20"]) == 2
        assert "error" in capsys.readouterr().err

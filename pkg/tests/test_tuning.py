import numpy as np
import pytest

from nowcastml.errors import GridSearchError, TooShortForFolds
from nowcastml.frame import QuarterLabel, QuarterlyFrame, quarter_range
from nowcastml.numeric import RngStream
from nowcastml.tuning import CvReport, grid_search, make_forward_chain_folds


def linear_frame(n=48, seed=0, noise=0.5):
    """GDP almost exactly linear in two indicators."""
    rng = np.random.default_rng(seed)
    a = rng.uniform(10, 20, n)
    b = rng.uniform(5, 9, n)
    gdp = 1000.0 + 30.0 * a + 50.0 * b + noise * rng.standard_normal(n)
    return QuarterlyFrame(
        quarter_range(QuarterLabel(2007, 1), n), {"GDP": gdp, "A": a, "B": b}, "GDP"
    )


class TestFoldPlan:
    def test_canonical_48_quarter_plan(self):
        plan = make_forward_chain_folds(48, 5, 4)
        assert [f.train_end for f in plan.folds] == [28, 32, 36, 40, 44]
        assert [(f.val_start, f.val_end) for f in plan.folds] == [
            (28, 32),
            (32, 36),
            (36, 40),
            (40, 44),
            (44, 48),
        ]

    def test_minimum_window_plan(self):
        plan = make_forward_chain_folds(28, 5, 4)
        assert plan.folds[0].train_end == 8
        assert plan.folds[-1].val_end == 28

    def test_too_short(self):
        with pytest.raises(TooShortForFolds):
            make_forward_chain_folds(20, 5, 4)

    @pytest.mark.parametrize("n_train", range(28, 121))
    def test_geometry_invariants(self, n_train):
        plan = make_forward_chain_folds(n_train, 5, 4)
        ends = []
        for fold in plan.folds:
            # temporal safety: training strictly precedes validation
            assert fold.train_end <= fold.val_start
            assert fold.train_end == fold.val_start  # expanding window
            assert fold.val_end - fold.val_start == 4
            ends.append((fold.val_start, fold.val_end))
        # validation blocks tile the last K*h indices exactly once
        covered = [i for s, e in ends for i in range(s, e)]
        assert covered == list(range(n_train - 20, n_train))
        assert plan.folds[-1].val_end == n_train


class TestGridSearch:
    def seed_stream(self):
        return RngStream(7, "test")

    def test_singleton_grid(self):
        frame = linear_frame()
        plan = make_forward_chain_folds(len(frame))
        report = grid_search("ridge", [{"lambda": 0.1}], frame, plan, ["A", "B"], self.seed_stream())
        assert report.chosen_index == 0
        assert len(report.points) == 1
        assert len(report.points[0].fold_rmse) == 5

    def test_huge_ridge_penalty_loses(self):
        frame = linear_frame(noise=0.5)
        plan = make_forward_chain_folds(len(frame))
        report = grid_search(
            "ridge",
            [{"lambda": 0.0}, {"lambda": 1e9}],
            frame,
            plan,
            ["A", "B"],
            self.seed_stream(),
        )
        assert report.chosen.params == {"lambda": 0.0}
        assert report.points[0].mean_rmse < report.points[1].mean_rmse

    def test_tie_breaks_toward_stronger_regularization(self):
        # constant target: every lambda predicts the same, largest wins
        frame = linear_frame()
        frame = frame.with_columns({"GDP": np.full(len(frame), 5000.0)})
        plan = make_forward_chain_folds(len(frame))
        report = grid_search(
            "ridge",
            [{"lambda": 0.1}, {"lambda": 10.0}],
            frame,
            plan,
            ["A", "B"],
            self.seed_stream(),
        )
        assert report.points[0].mean_rmse == report.points[1].mean_rmse
        assert report.chosen.params == {"lambda": 10.0}

    def test_tie_breaks_toward_smaller_k(self):
        frame = linear_frame()
        frame = frame.with_columns({"GDP": np.full(len(frame), 5000.0)})
        plan = make_forward_chain_folds(len(frame))
        report = grid_search(
            "knn", [{"k": 5}, {"k": 3}], frame, plan, ["A", "B"], self.seed_stream()
        )
        assert report.chosen.params == {"k": 3}

    def test_deterministic_given_seeds(self):
        frame = linear_frame(seed=4)
        plan = make_forward_chain_folds(len(frame))
        grid = [
            {"trees": 10, "max_depth": 3, "min_leaf": 1, "mtry": 2},
            {"trees": 20, "max_depth": 2, "min_leaf": 1, "mtry": 2},
        ]
        a = grid_search("rf", grid, frame, plan, ["A", "B"], RngStream(5, "x"))
        b = grid_search("rf", grid, frame, plan, ["A", "B"], RngStream(5, "x"))
        assert a.chosen_index == b.chosen_index
        assert a.points == b.points

    def test_scaler_sees_only_past_rows(self):
        # mutating rows at/after the first validation block leaves fold 0 intact
        frame = linear_frame(seed=8)
        plan = make_forward_chain_folds(len(frame))
        first_val_start = plan.folds[0].val_start
        mutated_gdp = frame.column("GDP").copy()
        mutated_gdp[first_val_start + 4 :] *= 1.7
        mutated_a = frame.column("A").copy()
        mutated_a[first_val_start + 4 :] += 100.0
        mutated = frame.with_columns({"GDP": mutated_gdp, "A": mutated_a})
        ra = grid_search("ridge", [{"lambda": 0.5}], frame, plan, ["A", "B"], self.seed_stream())
        rb = grid_search("ridge", [{"lambda": 0.5}], mutated, plan, ["A", "B"], self.seed_stream())
        assert ra.points[0].fold_rmse[0] == rb.points[0].fold_rmse[0]
        assert ra.points[0].fold_mape[0] == rb.points[0].fold_mape[0]

    def test_error_annotated_with_grid_point_and_fold(self):
        frame = linear_frame()
        plan = make_forward_chain_folds(len(frame))
        with pytest.raises(GridSearchError, match=r"grid point 0.*fold 0"):
            grid_search("knn", [{"k": 999}], frame, plan, ["A", "B"], self.seed_stream())

    def test_empty_grid(self):
        frame = linear_frame()
        plan = make_forward_chain_folds(len(frame))
        with pytest.raises(GridSearchError):
            grid_search("ridge", [], frame, plan, ["A", "B"], self.seed_stream())

    def test_report_csv_layout(self, tmp_path):
        frame = linear_frame()
        plan = make_forward_chain_folds(len(frame))
        report = grid_search(
            "ridge",
            [{"lambda": 0.0}, {"lambda": 1.0}],
            frame,
            plan,
            ["A", "B"],
            self.seed_stream(),
        )
        path = tmp_path / "cv.csv"
        report.write_csv(path)
        lines = path.read_text().strip().splitlines()
        # header + 2 grid points * (5 folds + 1 summary)
        assert len(lines) == 1 + 2 * 6
        assert lines[0].startswith("family,grid_index,params,fold")
        assert sum(line.endswith(",yes") for line in lines) == 1

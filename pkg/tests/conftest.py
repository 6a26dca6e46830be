import pytest

from nowcastml.config import RunConfig
from nowcastml.synth import generate_synthetic

# small grids keep the full-pipeline tests fast without losing any family
FAST_GRIDS = {
    "ridge": [{"lambda": 0.01}, {"lambda": 1.0}],
    "lasso": [{"lambda": 0.01}, {"lambda": 1.0}],
    "enet": [{"lambda": 0.1, "alpha": 0.5}],
    "pcr": [{"k": 2}, {"k": 5}],
    "knn": [{"k": 3}, {"k": 5}],
    "svr": [{"c": 1.0, "mu": 0.05}, {"c": 10.0, "mu": 0.1}],
    "rf": [{"trees": 50, "max_depth": 3, "min_leaf": 1, "mtry": 10}],
    "gbt": [
        {"trees": 50, "max_depth": 2, "learning_rate": 0.1, "lambda_reg": 1.0, "min_leaf": 1}
    ],
}


@pytest.fixture(scope="session")
def synth_frame():
    frame, truth = generate_synthetic(42, 64)
    return frame, truth


@pytest.fixture()
def fast_config(tmp_path):
    def make(**overrides):
        kwargs = dict(
            data_path="",
            target="GDP",
            cpi="CPI",
            seed=42,
            out_dir=str(tmp_path / "out"),
            grids=dict(FAST_GRIDS),
        )
        kwargs.update(overrides)
        return RunConfig(**kwargs)

    return make

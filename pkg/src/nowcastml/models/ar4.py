"""AR(4) benchmark on year-over-year log GDP growth.

The level series is transformed to g_t = ln(y_t) - ln(y_{t-4}); g is
regressed on a constant and its first four lags. Forecasts are recursive:
predicted growths feed later lags and predicted levels become the base for
levels more than four quarters out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TooShort
from ..frame import yoy_log_growth
from ..numeric import as_vector
from .base import FittedModel, ModelSpec

MIN_OBS = 13  # 4 for the growth transform + 4 lags + 5 regression rows


@dataclass(frozen=True)
class Ar4State:
    kind = "ar4"
    phi: np.ndarray  # intercept + 4 lag coefficients
    last_growths: np.ndarray  # most recent last
    last_levels: np.ndarray  # most recent last

    @property
    def n_features(self) -> int:
        return 0

    def forecast(self, horizon: int) -> np.ndarray:
        growths = list(self.last_growths)
        levels = list(self.last_levels)
        out = np.empty(horizon)
        for h in range(horizon):
            g = self.phi[0]
            for i in range(1, 5):
                g += self.phi[i] * growths[-i]
            level = levels[-4] * float(np.exp(g))
            growths.append(float(g))
            levels.append(level)
            out[h] = level
        return out


def fit_ar4(levels, **context) -> FittedModel:
    """Fit the growth autoregression on a positive quarterly level series."""
    y = as_vector(levels)
    n = y.shape[0]
    if n < MIN_OBS:
        raise TooShort(f"ar4 needs at least {MIN_OBS} observations, got {n}")
    g = yoy_log_growth(y)[4:]  # raises NonPositiveValue on bad levels
    m = g.shape[0]
    target = g[4:]
    design = np.column_stack(
        [np.ones(m - 4), g[3 : m - 1], g[2 : m - 2], g[1 : m - 3], g[0 : m - 4]]
    )
    # min-norm least squares: a constant growth history makes the lag
    # columns collinear and must still reproduce the constant
    phi = np.linalg.lstsq(design, target, rcond=None)[0]
    state = Ar4State(phi=phi, last_growths=g[-4:].copy(), last_levels=y[-4:].copy())
    return FittedModel(spec=ModelSpec("ar4"), state=state, **context)

"""Synthetic quarterly dataset with a known data-generating process.

Ten indicator series follow stationary AR(1) processes around fixed base
levels; GDP is a linear combination of the (real) indicators plus
quarter-of-year offsets and Gaussian noise. Nominal columns are re-inflated
with the generated CPI so that deflating against the first quarter recovers
the real series the GDP equation used. The returned truth descriptor records
every DGP parameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import BadDgp
from .frame import QuarterLabel, QuarterlyFrame, quarter_range
from .numeric import RngStream

INDICATORS = ("ELEC", "PETR", "VAT", "FDI", "CRED", "GCUREX", "GCAPEX", "TOUR", "XG", "MG")
NOMINAL_DEFAULT = ("VAT", "FDI", "CRED", "GCUREX", "GCAPEX")

_BASE_LEVELS = {
    "ELEC": 300.0,
    "PETR": 150.0,
    "VAT": 400.0,
    "FDI": 120.0,
    "CRED": 2500.0,
    "GCUREX": 700.0,
    "GCAPEX": 350.0,
    "TOUR": 90.0,
    "XG": 450.0,
    "MG": 600.0,
}
_COEFFICIENTS = {
    "ELEC": 2.0,
    "PETR": 1.5,
    "VAT": 1.2,
    "FDI": 0.8,
    "CRED": 0.3,
    "GCUREX": 0.5,
    "GCAPEX": 0.6,
    "TOUR": 3.0,
    "XG": 0.7,
    "MG": 0.4,
}


@dataclass(frozen=True)
class DgpSpec:
    """Knobs of the synthetic data-generating process."""

    coefficients: Mapping[str, float] = field(default_factory=lambda: dict(_COEFFICIENTS))
    intercept: float = 500.0
    noise_sd: float = 40.0
    autocorr: Mapping[str, float] = field(
        default_factory=lambda: {name: 0.7 for name in INDICATORS}
    )
    seasonal: tuple[float, float, float, float] = (0.0, 60.0, -40.0, 90.0)
    indicator_vol: float = 0.1
    cpi_drift: float = 0.012
    cpi_vol: float = 0.003
    start: QuarterLabel = QuarterLabel(2007, 1)

    def __post_init__(self):
        if set(self.coefficients) != set(INDICATORS):
            raise BadDgp(f"coefficients must cover exactly {INDICATORS}")
        if set(self.autocorr) != set(INDICATORS):
            raise BadDgp(f"autocorrelations must cover exactly {INDICATORS}")
        for name, rho in self.autocorr.items():
            if not -1.0 < rho < 1.0:
                raise BadDgp(f"autocorrelation for {name} must be in (-1, 1), got {rho}")
        if self.noise_sd < 0:
            raise BadDgp(f"noise_sd must be >= 0, got {self.noise_sd}")
        if len(self.seasonal) != 4:
            raise BadDgp("seasonal offsets must have 4 entries (Q1..Q4)")


def generate_synthetic(
    seed: int, n_quarters: int, dgp: DgpSpec | None = None
) -> tuple[QuarterlyFrame, dict]:
    """Build the synthetic frame and its ground-truth descriptor."""
    if n_quarters < 24:
        raise BadDgp(f"need at least 24 quarters, got {n_quarters}")
    dgp = dgp or DgpSpec()
    stream = RngStream(seed, "synth")
    index = quarter_range(dgp.start, n_quarters)

    real = {}
    for name in INDICATORS:
        rng = stream.substream(f"indicator/{name}").generator()
        rho = dgp.autocorr[name]
        z = np.empty(n_quarters)
        z[0] = rng.standard_normal()
        innov = rng.standard_normal(n_quarters - 1) * np.sqrt(1.0 - rho * rho)
        for t in range(1, n_quarters):
            z[t] = rho * z[t - 1] + innov[t - 1]
        real[name] = _BASE_LEVELS[name] * np.exp(dgp.indicator_vol * z)

    cpi_rng = stream.substream("cpi").generator()
    growth = dgp.cpi_drift + dgp.cpi_vol * cpi_rng.standard_normal(n_quarters - 1)
    cpi = 100.0 * np.concatenate([[1.0], np.cumprod(1.0 + growth)])

    noise = dgp.noise_sd * stream.substream("gdp_noise").generator().standard_normal(n_quarters)
    seasonal = np.array([dgp.seasonal[q.quarter - 1] for q in index])
    gdp = dgp.intercept + seasonal + noise
    for name in INDICATORS:
        gdp = gdp + dgp.coefficients[name] * real[name]
    if np.any(gdp <= 0):
        raise BadDgp("generated GDP is not strictly positive; lower noise_sd or raise intercept")

    columns = {"GDP": gdp}
    inflation = cpi / cpi[0]
    for name in INDICATORS:
        if name in NOMINAL_DEFAULT:
            columns[name] = real[name] * inflation
        else:
            columns[name] = real[name]
    columns["CPI"] = cpi

    frame = QuarterlyFrame(index, columns, "GDP")
    truth = {
        "seed": seed,
        "n_quarters": n_quarters,
        "start": str(dgp.start),
        "target": "GDP",
        "intercept": dgp.intercept,
        "coefficients": {name: dgp.coefficients[name] for name in INDICATORS},
        "seasonal": list(dgp.seasonal),
        "noise_sd": dgp.noise_sd,
        "autocorr": {name: dgp.autocorr[name] for name in INDICATORS},
        "indicator_vol": dgp.indicator_vol,
        "nominal_columns": list(NOMINAL_DEFAULT),
        "cpi_column": "CPI",
        "cpi_base_quarter": str(index[0]),
    }
    return frame, truth

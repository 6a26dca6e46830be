"""Run configuration: an INI-style file parsed strictly (unknown keys error).

Sections:
  [data]            path, target, cpi, cpi_base, nominal, features
  [run]             seed, families, weight_basis, out, folds, horizon,
                    min_initial_window
  [scenario NAME]   train_end, test_start, test_end
  [grid FAMILY]     one key per hyperparameter, comma-separated values;
                    the grid is the cartesian product

Omitted scenarios default to the three canonical partitions of a
2007Q1..2022Q4 frame; omitted grids fall back to the documented defaults.
"""

from __future__ import annotations

import configparser
import itertools
from dataclasses import dataclass, field

from .errors import ConfigError
from .frame import QuarterLabel, ScenarioSpec
from .models.base import FAMILIES, family_param_names

ML_FAMILIES = ("ridge", "lasso", "enet", "pcr", "rf", "knn", "svr", "gbt")

DEFAULT_SCENARIOS = (
    ScenarioSpec(
        "scenario1", QuarterLabel(2018, 4), QuarterLabel(2019, 1), QuarterLabel(2022, 4)
    ),
    ScenarioSpec(
        "scenario2", QuarterLabel(2020, 4), QuarterLabel(2021, 1), QuarterLabel(2022, 4)
    ),
    ScenarioSpec(
        "scenario3", QuarterLabel(2021, 4), QuarterLabel(2022, 1), QuarterLabel(2022, 4)
    ),
)

_DATA_KEYS = {"path", "target", "cpi", "cpi_base", "nominal", "features"}
_RUN_KEYS = {
    "seed",
    "families",
    "weight_basis",
    "out",
    "folds",
    "horizon",
    "min_initial_window",
}
_SCENARIO_KEYS = {"train_end", "test_start", "test_end"}


@dataclass(frozen=True)
class RunConfig:
    data_path: str
    target: str
    cpi: str = ""
    cpi_base: QuarterLabel | None = None
    nominal: tuple[str, ...] = ("VAT", "CRED", "GCUREX", "GCAPEX", "FDI")
    features: tuple[str, ...] | None = None
    seed: int = 42
    families: tuple[str, ...] = ML_FAMILIES
    weight_basis: str = "validation_mse"
    out_dir: str = "outputs"
    folds: int = 5
    horizon: int = 4
    min_initial_window: int = 8
    scenarios: tuple[ScenarioSpec, ...] = DEFAULT_SCENARIOS
    grids: dict = field(default_factory=dict)

    def scenario(self, name: str) -> ScenarioSpec:
        for s in self.scenarios:
            if s.name == name:
                return s
        raise ConfigError(f"no scenario named {name!r}; have {[s.name for s in self.scenarios]}")


def _parse_value(text: str):
    t = text.strip()
    low = t.lower()
    if low == "none":
        return None
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(t)
    except ValueError:
        pass
    try:
        return float(t)
    except ValueError:
        raise ConfigError(f"cannot parse value {text!r}") from None


def _parse_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _grid_from_section(family: str, items: dict[str, str]) -> list[dict]:
    allowed = family_param_names(family)
    axes = {}
    for key, raw in items.items():
        if key not in allowed:
            raise ConfigError(
                f"[grid {family}]: unknown hyperparameter {key!r} (allowed: {sorted(allowed)})"
            )
        values = [_parse_value(v) for v in _parse_list(raw)]
        if not values:
            raise ConfigError(f"[grid {family}]: empty value list for {key!r}")
        axes[key] = values
    if not axes:
        raise ConfigError(f"[grid {family}]: section is empty")
    names = list(axes)
    return [dict(zip(names, combo)) for combo in itertools.product(*(axes[n] for n in names))]


def load_config(path) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None)
    read = parser.read(path, encoding="utf-8")
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    kwargs: dict = {}
    grids: dict[str, list[dict]] = {}
    scenarios: list[ScenarioSpec] = []
    for section in parser.sections():
        items = dict(parser.items(section))
        if section == "data":
            unknown = set(items) - _DATA_KEYS
            if unknown:
                raise ConfigError(f"[data]: unknown keys {sorted(unknown)}")
            if "path" in items:
                kwargs["data_path"] = items["path"]
            if "target" in items:
                kwargs["target"] = items["target"]
            if "cpi" in items:
                kwargs["cpi"] = items["cpi"].strip()
            if items.get("cpi_base", "").strip():
                kwargs["cpi_base"] = QuarterLabel.parse(items["cpi_base"])
            if "nominal" in items:
                kwargs["nominal"] = tuple(_parse_list(items["nominal"]))
            if items.get("features", "").strip():
                kwargs["features"] = tuple(_parse_list(items["features"]))
        elif section == "run":
            unknown = set(items) - _RUN_KEYS
            if unknown:
                raise ConfigError(f"[run]: unknown keys {sorted(unknown)}")
            for key in ("seed", "folds", "horizon", "min_initial_window"):
                if key in items:
                    try:
                        kwargs[key] = int(items[key])
                    except ValueError:
                        raise ConfigError(f"[run]: {key} must be an integer") from None
            if "families" in items:
                families = tuple(_parse_list(items["families"]))
                for fam in families:
                    if fam not in ML_FAMILIES:
                        raise ConfigError(
                            f"[run]: unknown family {fam!r} (allowed: {list(ML_FAMILIES)})"
                        )
                kwargs["families"] = families
            if "weight_basis" in items:
                basis = items["weight_basis"].strip()
                if basis not in ("validation_mse", "test_mse"):
                    raise ConfigError(f"[run]: weight_basis must be validation_mse or test_mse")
                kwargs["weight_basis"] = basis
            if "out" in items:
                kwargs["out_dir"] = items["out"]
        elif section.startswith("scenario "):
            name = section[len("scenario "):].strip()
            unknown = set(items) - _SCENARIO_KEYS
            if unknown:
                raise ConfigError(f"[{section}]: unknown keys {sorted(unknown)}")
            missing = _SCENARIO_KEYS - set(items)
            if missing:
                raise ConfigError(f"[{section}]: missing keys {sorted(missing)}")
            scenarios.append(
                ScenarioSpec(
                    name,
                    QuarterLabel.parse(items["train_end"]),
                    QuarterLabel.parse(items["test_start"]),
                    QuarterLabel.parse(items["test_end"]),
                )
            )
        elif section.startswith("grid "):
            family = section[len("grid "):].strip()
            if family not in ML_FAMILIES:
                raise ConfigError(f"[{section}]: unknown family {family!r}")
            grids[family] = _grid_from_section(family, items)
        else:
            raise ConfigError(f"unknown section [{section}]")
    if "data_path" not in kwargs or "target" not in kwargs:
        raise ConfigError("[data] must set both 'path' and 'target'")
    if scenarios:
        names = [s.name for s in scenarios]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate scenario names {names}")
        kwargs["scenarios"] = tuple(scenarios)
    kwargs["grids"] = grids
    return RunConfig(**kwargs)


def default_grid(family: str, n_features: int) -> list[dict]:
    """Documented fallback grid for each family."""
    lam_ladder = [1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0]
    if family == "ridge" or family == "lasso":
        return [{"lambda": lam} for lam in lam_ladder]
    if family == "enet":
        alphas = [0.1, 0.3, 0.5, 0.7, 0.9]
        return [{"lambda": lam, "alpha": a} for lam in lam_ladder for a in alphas]
    if family == "pcr":
        return [{"k": k} for k in range(1, n_features + 1)]
    if family == "knn":
        return [{"k": k} for k in range(1, 11)]
    if family == "svr":
        return [
            {"c": c, "mu": mu}
            for c in (0.1, 1.0, 10.0, 100.0)
            for mu in (0.01, 0.05, 0.1, 0.5)
        ]
    if family == "rf":
        return [
            {"trees": t, "max_depth": d, "min_leaf": 1, "mtry": n_features}
            for t in (100, 300)
            for d in (2, 3, 4)
        ]
    if family == "gbt":
        return [
            {"trees": t, "max_depth": d, "learning_rate": lr, "lambda_reg": 1.0, "min_leaf": 1}
            for t in (100, 300)
            for d in (2, 3, 4)
            for lr in (0.05, 0.1, 0.3)
        ]
    raise ConfigError(f"no default grid for family {family!r}")


def resolve_grid(config: RunConfig, family: str, n_features: int) -> list[dict]:
    """The configured grid completed with structural defaults, or the default grid."""
    if family not in config.grids:
        return default_grid(family, n_features)
    fill = {
        "rf": {"min_leaf": 1, "mtry": n_features},
        "gbt": {"min_leaf": 1, "lambda_reg": 1.0},
    }.get(family, {})
    out = []
    for point in config.grids[family]:
        completed = dict(fill)
        completed.update(point)
        out.append(completed)
    return out

"""Quarterly data model: CSV ingestion, deflation, growth transform, robust
scaling and scenario-based train/test splits.

Frames are immutable: every operation returns a new frame and column arrays
are stored read-only, so frames are safe to share across workers.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BadQuarterLabel,
    BaseOutOfRange,
    BoundaryOutOfRange,
    DuplicateColumn,
    DuplicateQuarter,
    EmptyColumnSet,
    EmptyData,
    IndexGap,
    MissingColumn,
    NonNumericCell,
    NonPositiveCpi,
    NonPositiveValue,
    UnknownColumn,
)
from .numeric import quantile

_QUARTER_RE = re.compile(r"^(\d{4})Q([1-4])$")


@dataclass(frozen=True, order=True)
class QuarterLabel:
    """A calendar quarter, totally ordered by (year, quarter)."""

    year: int
    quarter: int

    def __post_init__(self):
        if self.year < 1900:
            raise BadQuarterLabel(f"year {self.year} before 1900")
        if self.quarter not in (1, 2, 3, 4):
            raise BadQuarterLabel(f"quarter {self.quarter} not in 1..4")

    @staticmethod
    def parse(text: str) -> "QuarterLabel":
        m = _QUARTER_RE.match(text.strip())
        if m is None:
            raise BadQuarterLabel(f"cannot parse quarter label {text!r}")
        return QuarterLabel(int(m.group(1)), int(m.group(2)))

    def successor(self) -> "QuarterLabel":
        if self.quarter == 4:
            return QuarterLabel(self.year + 1, 1)
        return QuarterLabel(self.year, self.quarter + 1)

    def __str__(self) -> str:
        return f"{self.year}Q{self.quarter}"


def quarter_range(start: QuarterLabel, count: int) -> list[QuarterLabel]:
    """``count`` consecutive labels starting at ``start``."""
    out = [start]
    for _ in range(count - 1):
        out.append(out[-1].successor())
    return out


class QuarterlyFrame:
    """Column-oriented table of real-valued series on a gap-free quarter index."""

    def __init__(
        self,
        index: Sequence[QuarterLabel],
        columns: Mapping[str, Iterable[float]],
        target_name: str,
    ):
        self.index: tuple[QuarterLabel, ...] = tuple(index)
        if not self.index:
            raise EmptyData("frame needs at least one row")
        for prev, cur in zip(self.index, self.index[1:]):
            if cur != prev.successor():
                if cur == prev:
                    raise DuplicateQuarter(f"duplicate quarter {cur}")
                raise IndexGap(f"missing quarter {prev.successor()} before {cur}")
        cols: dict[str, np.ndarray] = {}
        for name, values in columns.items():
            arr = np.asarray(values, dtype=np.float64)
            if arr.ndim != 1 or arr.shape[0] != len(self.index):
                raise EmptyData(
                    f"column {name!r} has length {arr.shape}, index has {len(self.index)}"
                )
            if not np.all(np.isfinite(arr)):
                raise NonNumericCell(f"column {name!r} contains non-finite values")
            arr = arr.copy()
            arr.flags.writeable = False
            cols[name] = arr
        if target_name not in cols:
            raise MissingColumn(f"target column {target_name!r} not present")
        self.columns: dict[str, np.ndarray] = cols
        self.target_name = target_name

    def __len__(self) -> int:
        return len(self.index)

    @property
    def column_names(self) -> list[str]:
        return list(self.columns)

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise UnknownColumn(f"no column {name!r}")
        return self.columns[name]

    @property
    def target(self) -> np.ndarray:
        return self.columns[self.target_name]

    def position(self, label: QuarterLabel) -> int:
        first = self.index[0]
        pos = (label.year - first.year) * 4 + (label.quarter - first.quarter)
        if pos < 0 or pos >= len(self.index):
            raise BoundaryOutOfRange(f"{label} outside frame range {first}..{self.index[-1]}")
        return pos

    def slice_rows(self, start: int, stop: int) -> "QuarterlyFrame":
        if not 0 <= start < stop <= len(self.index):
            raise BoundaryOutOfRange(f"row slice [{start}, {stop}) invalid for {len(self)} rows")
        cols = {name: arr[start:stop] for name, arr in self.columns.items()}
        return QuarterlyFrame(self.index[start:stop], cols, self.target_name)

    def with_columns(self, replacements: Mapping[str, np.ndarray]) -> "QuarterlyFrame":
        """New frame with the given columns replaced (others shared)."""
        cols = dict(self.columns)
        for name, values in replacements.items():
            if name not in cols:
                raise UnknownColumn(f"no column {name!r}")
            cols[name] = np.asarray(values, dtype=np.float64)
        return QuarterlyFrame(self.index, cols, self.target_name)

    def feature_matrix(self, names: Sequence[str]) -> np.ndarray:
        """Rows x features matrix in the given column order."""
        return np.column_stack([self.column(n) for n in names])


def load_csv(path, target_name: str) -> QuarterlyFrame:
    """Read a quarterly CSV (first column "quarter", remaining columns numeric).

    Rows may appear in any order; they are sorted and checked gap-free.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyData(f"{path}: file is empty") from None
        if not header or header[0].strip() != "quarter":
            raise MissingColumn(f"{path}: first column must be 'quarter', got {header[:1]}")
        names = [h.strip() for h in header[1:]]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise DuplicateColumn(f"{path}: duplicate column names {dupes}")
        rows: list[tuple[QuarterLabel, list[float]]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(c.strip() == "" for c in row):
                continue
            if len(row) != len(names) + 1:
                raise NonNumericCell(f"{path}:{lineno}: expected {len(names) + 1} cells, got {len(row)}")
            label = QuarterLabel.parse(row[0])
            values = []
            for name, cell in zip(names, row[1:]):
                try:
                    v = float(cell)
                except ValueError:
                    raise NonNumericCell(
                        f"{path}:{lineno}: column {name!r} at {label}: {cell!r} is not numeric"
                    ) from None
                if not np.isfinite(v):
                    raise NonNumericCell(f"{path}:{lineno}: column {name!r} at {label}: non-finite value")
                values.append(v)
            rows.append((label, values))
    if not rows:
        raise EmptyData(f"{path}: no data rows")
    rows.sort(key=lambda r: r[0])
    for (a, _), (b, _) in zip(rows, rows[1:]):
        if a == b:
            raise DuplicateQuarter(f"{path}: duplicate quarter {a}")
        if b != a.successor():
            raise IndexGap(f"{path}: missing quarter {a.successor()}")
    index = [r[0] for r in rows]
    data = np.array([r[1] for r in rows], dtype=np.float64)
    columns = {name: data[:, j] for j, name in enumerate(names)}
    if target_name not in columns:
        raise MissingColumn(f"{path}: target column {target_name!r} not in header")
    return QuarterlyFrame(index, columns, target_name)


def write_csv(frame: QuarterlyFrame, path) -> None:
    """Write a frame in the load_csv schema at full float precision."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["quarter", *frame.column_names])
        arrays = [frame.columns[n] for n in frame.column_names]
        for i, label in enumerate(frame.index):
            writer.writerow([str(label), *(repr(float(a[i])) for a in arrays)])


def deflate(
    frame: QuarterlyFrame,
    cpi: str,
    base: QuarterLabel,
    columns: Iterable[str],
) -> QuarterlyFrame:
    """Convert nominal columns to real terms: real_t = nominal_t * cpi_base / cpi_t."""
    cpi_values = frame.column(cpi)
    if np.any(cpi_values <= 0):
        raise NonPositiveCpi(f"cpi column {cpi!r} has non-positive entries")
    try:
        base_pos = frame.position(base)
    except BoundaryOutOfRange:
        raise BaseOutOfRange(f"base quarter {base} not in frame") from None
    cpi_base = cpi_values[base_pos]
    factor = cpi_base / cpi_values
    replacements = {}
    for name in columns:
        if name == cpi:
            continue
        replacements[name] = frame.column(name) * factor
    return frame.with_columns(replacements)


def yoy_log_growth(series) -> np.ndarray:
    """Year-over-year log growth: g_t = ln(x_t) - ln(x_{t-4}).

    The first four entries are undefined and returned as NaN. Positivity is
    required only for entries that actually enter a log.
    """
    x = np.asarray(series, dtype=np.float64)
    if x.ndim != 1:
        raise NonPositiveValue(f"expected a 1-D series, got ndim={x.ndim}")
    n = x.shape[0]
    out = np.full(n, np.nan)
    if n <= 4:
        return out
    used = x[np.r_[0 : n - 4, 4:n]]
    if np.any(used <= 0) or not np.all(np.isfinite(used)):
        bad = int(np.argmax(~((x > 0) & np.isfinite(x))))
        raise NonPositiveValue(f"non-positive value at position {bad} used in log growth")
    out[4:] = np.log(x[4:]) - np.log(x[:-4])
    return out


@dataclass(frozen=True)
class ColumnScale:
    median: float
    iqr: float
    degenerate: bool

    @property
    def divisor(self) -> float:
        # iqr == 0 falls back to 1 so constant columns stay usable
        return 1.0 if self.degenerate else self.iqr


@dataclass(frozen=True)
class ScalerParams:
    """Per-column median/IQR from a training split, reusable on later splits."""

    scales: dict[str, ColumnScale]

    def columns(self) -> list[str]:
        return list(self.scales)


def fit_robust_scaler(frame: QuarterlyFrame, columns: Iterable[str]) -> ScalerParams:
    """Median / interquartile-range parameters for the given columns.

    Quartiles use linear interpolation between order statistics (position
    (n-1)q). Columns with zero IQR get divisor 1 and a degenerate flag.
    """
    names = list(columns)
    if not names:
        raise EmptyColumnSet("no columns to scale")
    scales = {}
    for name in names:
        values = frame.column(name)
        q1 = quantile(values, 0.25)
        q2 = quantile(values, 0.5)
        q3 = quantile(values, 0.75)
        iqr = q3 - q1
        scales[name] = ColumnScale(median=q2, iqr=iqr, degenerate=(iqr == 0.0))
    return ScalerParams(scales)


def apply_scaler(params: ScalerParams, frame: QuarterlyFrame) -> QuarterlyFrame:
    """Scale every column covered by ``params``: (x - median) / iqr."""
    replacements = {}
    for name, scale in params.scales.items():
        replacements[name] = (frame.column(name) - scale.median) / scale.divisor
    return frame.with_columns(replacements)


def invert_scaler(params: ScalerParams, frame: QuarterlyFrame) -> QuarterlyFrame:
    """Inverse of :func:`apply_scaler`."""
    replacements = {}
    for name, scale in params.scales.items():
        replacements[name] = frame.column(name) * scale.divisor + scale.median
    return frame.with_columns(replacements)


@dataclass(frozen=True)
class ScenarioSpec:
    """Named train/test partition; the test window starts right after training."""

    name: str
    train_end: QuarterLabel
    test_start: QuarterLabel
    test_end: QuarterLabel

    def __post_init__(self):
        if self.test_start != self.train_end.successor():
            raise BoundaryOutOfRange(
                f"{self.name}: test_start {self.test_start} must immediately follow "
                f"train_end {self.train_end}"
            )
        if self.test_end < self.test_start:
            raise BoundaryOutOfRange(
                f"{self.name}: test_end {self.test_end} before test_start {self.test_start}"
            )


def split_scenario(
    frame: QuarterlyFrame, spec: ScenarioSpec
) -> tuple[QuarterlyFrame, QuarterlyFrame]:
    """(train, test) frames: rows <= train_end and rows in [test_start, test_end]."""
    end_train = frame.position(spec.train_end)
    start_test = frame.position(spec.test_start)
    end_test = frame.position(spec.test_end)
    train = frame.slice_rows(0, end_train + 1)
    test = frame.slice_rows(start_test, end_test + 1)
    return train, test

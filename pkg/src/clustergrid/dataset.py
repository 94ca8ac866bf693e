"""Tabular ingestion and the immutable feature matrix every stage consumes.

A Dataset is numeric-only: categorical encoding and imputation are the
caller's job. Missing or unparseable cells are a hard error unless the
caller opts into row dropping.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import IngestionError, InsufficientDataError, SchemaError

SCALING_RAW = "raw"
SCALING_STANDARDIZED = "standardized"
SCALING_MINMAX = "minmax"


@dataclass(frozen=True)
class Dataset:
    """Immutable numeric feature matrix with named columns.

    key_features is the subset of columns charted during triage. The values
    array is float64, row-major, and write-locked so one instance can be
    shared across concurrent candidate evaluations.
    """

    columns: tuple[str, ...]
    values: np.ndarray
    key_features: tuple[str, ...] = ()
    scaling: str = SCALING_RAW

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 2:
            raise SchemaError("values must be a 2-D matrix")
        if arr.shape[0] < 2:
            raise InsufficientDataError(f"need at least 2 rows, got {arr.shape[0]}")
        if arr.shape[1] < 1:
            raise SchemaError("need at least 1 column")
        if arr.shape[1] != len(self.columns):
            raise SchemaError(
                f"{len(self.columns)} column names for {arr.shape[1]} value columns"
            )
        if not np.isfinite(arr).all():
            bad = np.argwhere(~np.isfinite(arr))[0]
            raise IngestionError(
                f"non-finite value at row {bad[0]}, column {self.columns[bad[1]]!r}",
                row=int(bad[0]),
                column=self.columns[bad[1]],
            )
        if any(not name for name in self.columns):
            raise SchemaError("column names must be nonempty")
        if len(set(self.columns)) != len(self.columns):
            dupes = sorted({c for c in self.columns if self.columns.count(c) > 1})
            raise SchemaError(f"duplicate column names: {', '.join(dupes)}")
        unknown = [f for f in self.key_features if f not in self.columns]
        if unknown:
            raise SchemaError(f"key features not in columns: {', '.join(unknown)}")
        if self.scaling not in (SCALING_RAW, SCALING_STANDARDIZED, SCALING_MINMAX):
            raise SchemaError(f"unknown scaling tag {self.scaling!r}")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "key_features", tuple(self.key_features))
        object.__setattr__(self, "values", arr)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def column_index(self, name: str) -> int:
        return self.columns.index(name)


def _parse_cell(text: str) -> float:
    """Parse one CSV cell to a finite float; raises ValueError otherwise."""
    value = float(text)  # raises ValueError on empty/garbage
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {text!r}")
    return value


def load_csv(
    path: str | Path,
    *,
    drop_na: bool = False,
    key_features: tuple[str, ...] | list[str] = (),
) -> tuple[Dataset, int]:
    """Load a UTF-8, comma-delimited, header-first CSV into a Dataset.

    Returns (dataset, dropped_rows). With drop_na, rows containing empty or
    unparseable cells are removed and counted; without it the first bad cell
    raises IngestionError naming its row and column (1-based data row).
    """
    path = Path(path)
    try:
        fh = open(path, encoding="utf-8", newline="")
    except FileNotFoundError:
        raise IngestionError(f"dataset file not found: {path}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected a header row") from None
        header = [name.strip() for name in header]
        if len(set(header)) != len(header):
            dupes = sorted({c for c in header if header.count(c) > 1})
            raise SchemaError(f"{path}: duplicate header names: {', '.join(dupes)}")

        rows: list[list[float]] = []
        dropped = 0
        for row_number, record in enumerate(reader, start=1):
            if not record:
                continue  # blank line
            if len(record) != len(header):
                if drop_na:
                    dropped += 1
                    continue
                raise IngestionError(
                    f"{path}: row {row_number} has {len(record)} cells, expected {len(header)}",
                    row=row_number,
                )
            try:
                rows.append([_parse_cell(cell) for cell in record])
            except ValueError:
                if drop_na:
                    dropped += 1
                    continue
                bad_col = next(
                    i for i, cell in enumerate(record) if not _parseable(cell)
                )
                raise IngestionError(
                    f"{path}: unparseable cell at row {row_number}, "
                    f"column {header[bad_col]!r}",
                    row=row_number,
                    column=header[bad_col],
                ) from None

    if len(rows) < 2:
        raise InsufficientDataError(
            f"{path}: {len(rows)} usable rows after parsing ({dropped} dropped), need at least 2"
        )
    dataset = Dataset(
        columns=tuple(header),
        values=np.array(rows, dtype=np.float64),
        key_features=tuple(key_features),
    )
    return dataset, dropped


def _parseable(cell: str) -> bool:
    try:
        _parse_cell(cell)
        return True
    except ValueError:
        return False


def population_stats(d: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Per-column mean and population standard deviation (divisor n)."""
    mean = d.values.mean(axis=0)
    std = d.values.std(axis=0)  # ddof=0: the dataset is the population
    return mean, std


def standardize(d: Dataset) -> Dataset:
    """Z-score each column using the population standard deviation.

    Constant columns become all-zero rather than failing. The mean gets one
    compensation step so near-constant columns at large magnitudes are not
    destroyed by cancellation (keeps re-standardization a no-op to ~1e-15).
    """
    constant = d.values.max(axis=0) == d.values.min(axis=0)
    mean = d.values.mean(axis=0)
    mean = mean + (d.values - mean).mean(axis=0)
    centered = d.values - mean
    std = np.sqrt((centered**2).mean(axis=0))
    safe = np.where((std == 0.0) | constant, 1.0, std)
    values = centered / safe
    values[:, (std == 0.0) | constant] = 0.0
    return replace(d, values=values, scaling=SCALING_STANDARDIZED)


def minmax_scale(d: Dataset) -> Dataset:
    """Affinely map each column to [0, 1]; constant columns become all-0.5."""
    lo = d.values.min(axis=0)
    hi = d.values.max(axis=0)
    span = hi - lo
    safe = np.where(span == 0.0, 1.0, span)
    values = (d.values - lo) / safe
    values[:, span == 0.0] = 0.5
    return replace(d, values=values, scaling=SCALING_MINMAX)

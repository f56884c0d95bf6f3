"""Loading, validation and windowing of region time-series and feature tables.

Input formats (all UTF-8 CSV, LF or CRLF):
  - epicurve table:   ``region,<ISO date>,<ISO date>,...`` one row per region
  - population table: ``region,population``
  - feature table:    ``region,<feature name>,...`` one row per region

Validation is strict: malformed cells, duplicate regions, gaps in the date
axis, negative counts and missing values are hard errors that name the
offending row/column. Nothing is imputed.
"""

from __future__ import annotations

import csv
import datetime
import warnings
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np


class IngestError(ValueError):
    """An input table failed validation; the message names the location."""


def _read_rows(path):
    path = Path(path)
    if not path.is_file():
        raise IngestError(f"input file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise IngestError(f"{path}: file is empty")
    return rows


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class EpicurveMatrix:
    """Daily case counts for a set of regions over a contiguous date range.

    ``values`` has shape (n_regions, n_days); row i is the epicurve of
    ``region_names[i]``. ``populations`` (persons, optional) is aligned with
    ``region_names``. Non-negativity is enforced at load time only, so
    preprocessed derivatives (e.g. z-scores) remain valid instances.
    """

    region_names: tuple[str, ...]
    dates: tuple[datetime.date, ...]
    values: np.ndarray
    populations: np.ndarray | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise IngestError(f"values must be 2-D, got shape {values.shape}")
        n_regions, n_days = values.shape
        if len(self.region_names) != n_regions:
            raise IngestError(
                f"{len(self.region_names)} region names for {n_regions} value rows"
            )
        if len(self.dates) != n_days:
            raise IngestError(f"{len(self.dates)} dates for {n_days} value columns")
        if n_regions == 0 or n_days == 0:
            raise IngestError("matrix must have at least one region and one day")
        seen = set()
        for name in self.region_names:
            if not name:
                raise IngestError("empty region name")
            if name in seen:
                raise IngestError(f"duplicate region: {name!r}")
            seen.add(name)
        for prev, cur in zip(self.dates, self.dates[1:]):
            if (cur - prev).days != 1:
                raise IngestError(f"non-consecutive dates: {prev} followed by {cur}")
        object.__setattr__(self, "values", _freeze(values))
        if self.populations is not None:
            pops = np.asarray(self.populations, dtype=np.int64)
            if pops.shape != (n_regions,):
                raise IngestError(
                    f"populations shape {pops.shape} does not match {n_regions} regions"
                )
            bad = np.nonzero(pops <= 0)[0]
            if bad.size:
                raise IngestError(
                    f"non-positive population for region {self.region_names[bad[0]]!r}"
                )
            object.__setattr__(self, "populations", _freeze(pops))

    @property
    def n_regions(self) -> int:
        return self.values.shape[0]

    @property
    def n_days(self) -> int:
        return self.values.shape[1]

    def with_values(self, values: np.ndarray) -> "EpicurveMatrix":
        """Same regions/dates/populations, new value matrix (same shape)."""
        if np.shape(values) != self.values.shape:
            raise IngestError(
                f"replacement values shape {np.shape(values)} != {self.values.shape}"
            )
        return replace(self, values=np.asarray(values, dtype=float))


@dataclass(frozen=True)
class FeatureTable:
    """Scalar per-region features, row-aligned with a paired EpicurveMatrix."""

    region_names: tuple[str, ...]
    feature_names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.region_names), len(self.feature_names)):
            raise IngestError(
                f"feature values shape {values.shape} does not match "
                f"{len(self.region_names)} regions x {len(self.feature_names)} features"
            )
        if np.isnan(values).any():
            r, c = np.argwhere(np.isnan(values))[0]
            raise IngestError(
                f"missing value for region {self.region_names[r]!r}, "
                f"feature {self.feature_names[c]!r}"
            )
        object.__setattr__(self, "values", _freeze(values))

    def column(self, feature: str) -> np.ndarray:
        return self.values[:, self.feature_names.index(feature)]


@dataclass(frozen=True)
class Window:
    """One fixed-length slice of the date axis, as a standalone matrix."""

    index: int
    start_date: datetime.date
    end_date: datetime.date
    matrix: EpicurveMatrix

    @property
    def values(self) -> np.ndarray:
        return self.matrix.values


def load_epicurves(path, population_path=None) -> EpicurveMatrix:
    """Read an epicurve CSV (and optional population CSV) into a validated matrix.

    Heads: first header cell is the region-name column, the rest are ISO
    dates. Raises IngestError naming the row/column for any malformed,
    non-numeric, negative or out-of-order content.
    """
    rows = _read_rows(path)
    header = rows[0]
    if len(header) < 2:
        raise IngestError(f"{path}: header must hold a region column and at least one date")
    dates = []
    for j, cell in enumerate(header[1:], start=2):
        try:
            dates.append(datetime.date.fromisoformat(cell.strip()))
        except ValueError:
            raise IngestError(
                f"{path}: header column {j} is not an ISO date: {cell!r}"
            ) from None
    names = []
    data = np.empty((len(rows) - 1, len(dates)))
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise IngestError(
                f"{path}: row {i} has {len(row)} cells, expected {len(header)}"
            )
        names.append(row[0].strip())
        for j, cell in enumerate(row[1:], start=2):
            try:
                v = float(cell)
            except ValueError:
                raise IngestError(
                    f"{path}: non-numeric value {cell!r} at row {i}, column {j}"
                ) from None
            if not np.isfinite(v):
                raise IngestError(
                    f"{path}: non-finite value {cell!r} at row {i}, column {j}"
                )
            if v < 0:
                raise IngestError(
                    f"{path}: negative count {v} at row {i}, column {j}"
                )
            data[i - 2, j - 2] = v

    populations = None
    if population_path is not None:
        populations = _load_populations(population_path, names)
    return EpicurveMatrix(tuple(names), tuple(dates), data, populations)


def _load_populations(path, region_names) -> np.ndarray:
    rows = _read_rows(path)
    if [c.strip().lower() for c in rows[0][:2]] != ["region", "population"]:
        raise IngestError(f"{path}: expected header 'region,population'")
    table = {}
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise IngestError(f"{path}: row {i} has {len(row)} cells, expected 2")
        name = row[0].strip()
        if name in table:
            raise IngestError(f"{path}: duplicate region: {name!r}")
        try:
            pop = int(row[1])
        except ValueError:
            raise IngestError(
                f"{path}: non-integer population {row[1]!r} at row {i}"
            ) from None
        table[name] = pop
    missing = [n for n in region_names if n not in table]
    extra = [n for n in table if n not in set(region_names)]
    if missing or extra:
        raise IngestError(
            f"{path}: region mismatch with epicurve table"
            + (f"; absent: {missing}" if missing else "")
            + (f"; unknown: {extra}" if extra else "")
        )
    return np.array([table[n] for n in region_names], dtype=np.int64)


def load_features(path, epicurves: EpicurveMatrix) -> FeatureTable:
    """Read a feature CSV and reorder its rows to match ``epicurves``.

    The join is by exact region name (case-sensitive). Any region present in
    only one of the two tables, or any empty/non-numeric cell, is an error.
    """
    rows = _read_rows(path)
    header = rows[0]
    if len(header) < 2:
        raise IngestError(f"{path}: header must hold a region column and at least one feature")
    feature_names = tuple(c.strip() for c in header[1:])
    table = {}
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise IngestError(
                f"{path}: row {i} has {len(row)} cells, expected {len(header)}"
            )
        name = row[0].strip()
        if name in table:
            raise IngestError(f"{path}: duplicate region: {name!r}")
        vals = []
        for j, cell in enumerate(row[1:], start=2):
            if cell.strip() == "":
                raise IngestError(
                    f"{path}: missing value for region {name!r}, "
                    f"feature {feature_names[j - 2]!r}"
                )
            try:
                v = float(cell)
            except ValueError:
                raise IngestError(
                    f"{path}: non-numeric value {cell!r} at row {i}, column {j}"
                ) from None
            if not np.isfinite(v):
                raise IngestError(
                    f"{path}: missing value for region {name!r}, "
                    f"feature {feature_names[j - 2]!r}"
                )
            vals.append(v)
        table[name] = vals
    missing = [n for n in epicurves.region_names if n not in table]
    extra = [n for n in table if n not in set(epicurves.region_names)]
    if missing or extra:
        raise IngestError(
            f"{path}: region mismatch with epicurve table"
            + (f"; absent: {missing}" if missing else "")
            + (f"; unknown: {extra}" if extra else "")
        )
    values = np.array([table[n] for n in epicurves.region_names])
    return FeatureTable(epicurves.region_names, feature_names, values)


def split_windows(m: EpicurveMatrix, window_len: int = 30) -> list[Window]:
    """Cut the date axis into disjoint consecutive windows of ``window_len`` days.

    Trailing days that do not fill a whole window are dropped with a warning.
    """
    if window_len < 1:
        raise ValueError(f"window_len must be positive, got {window_len}")
    if m.n_days < window_len:
        raise ValueError(
            f"series of {m.n_days} days is shorter than one window of {window_len}"
        )
    count = m.n_days // window_len
    dropped = m.n_days - count * window_len
    if dropped:
        warnings.warn(
            f"dropping {dropped} trailing day(s) that do not fill a "
            f"{window_len}-day window",
            stacklevel=2,
        )
    windows = []
    for w in range(count):
        lo, hi = w * window_len, (w + 1) * window_len
        sub = EpicurveMatrix(
            m.region_names, m.dates[lo:hi], m.values[:, lo:hi], m.populations
        )
        windows.append(Window(w, m.dates[lo], m.dates[hi - 1], sub))
    return windows


def write_epicurves(m: EpicurveMatrix, path) -> None:
    """Write the matrix in the epicurve CSV format. Round-trips exactly."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["region"] + [d.isoformat() for d in m.dates])
        for name, row in zip(m.region_names, m.values):
            writer.writerow([name] + [repr(v) for v in row.tolist()])


def write_populations(m: EpicurveMatrix, path) -> None:
    if m.populations is None:
        raise ValueError("matrix carries no populations")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["region", "population"])
        for name, pop in zip(m.region_names, m.populations.tolist()):
            writer.writerow([name, pop])


def write_features(t: FeatureTable, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["region"] + list(t.feature_names))
        for name, row in zip(t.region_names, t.values):
            writer.writerow([name] + [repr(v) for v in row.tolist()])

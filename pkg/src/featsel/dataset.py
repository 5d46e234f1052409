"""Tabular data model: typed columns, the class column, and feature masks.

A :class:`Dataset` is an immutable column store.  Every column is either
numeric (finite float64 values) or categorical (integer codes into a level
table).  One column is designated the class column; the remaining columns, in
order, are the *features* over which :class:`FeatureMask` bit vectors are
defined.  All search and measure code in the package operates on these types.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError, MaskError, MeasureError


class TaskKind(Enum):
    CLASSIFICATION = "classification"
    REGRESSION = "regression"


@dataclass(frozen=True, eq=False)
class NumericColumn:
    """A column of finite floating-point values."""

    name: str
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1:
            raise DataError(f"column {self.name!r}: values must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise DataError(f"column {self.name!r}: non-finite value")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class CategoricalColumn:
    """A column of integer codes indexing an ordered level table.

    Levels are ordered by first appearance in the source data.
    """

    name: str
    levels: tuple[str, ...]
    codes: np.ndarray

    def __post_init__(self):
        if not self.levels:
            raise DataError(f"column {self.name!r}: level table is empty")
        codes = np.asarray(self.codes, dtype=np.int64)
        if codes.ndim != 1:
            raise DataError(f"column {self.name!r}: codes must be one-dimensional")
        if len(codes) and (codes.min() < 0 or codes.max() >= len(self.levels)):
            raise DataError(f"column {self.name!r}: code outside level table")
        codes.flags.writeable = False
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "levels", tuple(self.levels))

    def __len__(self) -> int:
        return len(self.codes)


Column = NumericColumn | CategoricalColumn


def categorical_from_strings(name: str, cells: Sequence[str]) -> CategoricalColumn:
    """Build a categorical column, levels ordered by first appearance."""
    levels: dict[str, int] = {}
    codes = np.empty(len(cells), dtype=np.int64)
    for i, cell in enumerate(cells):
        codes[i] = levels.setdefault(cell, len(levels))
    return CategoricalColumn(name, tuple(levels), codes)


@dataclass(frozen=True, eq=False)
class Dataset:
    """An immutable table with uniquely named columns and one class column."""

    columns: tuple[Column, ...]
    class_name: str

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise DataError("duplicate column names")
        if self.class_name not in names:
            raise DataError(f"class column {self.class_name!r} not present")
        if len(self.columns) < 2:
            raise DataError("at least one feature column is required")
        lengths = {len(c) for c in self.columns}
        if len(lengths) != 1:
            raise DataError("columns differ in length")
        n_rows = lengths.pop()
        if n_rows < 1:
            raise DataError("dataset has no rows")
        object.__setattr__(self, "n_rows", n_rows)
        object.__setattr__(
            self, "_by_name", {c.name: c for c in self.columns}
        )

    n_rows: int = field(init=False)

    def column(self, name: str) -> Column:
        try:
            return self._by_name[name]
        except KeyError:
            raise DataError(f"no column named {name!r}") from None

    @property
    def class_column(self) -> Column:
        return self._by_name[self.class_name]

    @property
    def feature_columns(self) -> tuple[Column, ...]:
        return tuple(c for c in self.columns if c.name != self.class_name)

    @property
    def feature_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.feature_columns)

    @property
    def n_features(self) -> int:
        return len(self.columns) - 1

    def take_rows(self, indices: np.ndarray | Sequence[int]) -> "Dataset":
        """A new dataset restricted to the given rows (order preserved)."""
        idx = np.asarray(indices, dtype=np.int64)
        cols: list[Column] = []
        for c in self.columns:
            if isinstance(c, NumericColumn):
                cols.append(NumericColumn(c.name, c.values[idx]))
            else:
                cols.append(CategoricalColumn(c.name, c.levels, c.codes[idx]))
        return Dataset(tuple(cols), self.class_name)


@dataclass(frozen=True)
class FeatureMask:
    """A bit per feature column, in column order."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise MaskError("mask bits must be 0 or 1")
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))

    @classmethod
    def from_indices(cls, width: int, indices: Iterable[int]) -> "FeatureMask":
        bits = [0] * width
        for i in indices:
            bits[i] = 1
        return cls(tuple(bits))

    @classmethod
    def full(cls, width: int) -> "FeatureMask":
        return cls((1,) * width)

    @property
    def width(self) -> int:
        return len(self.bits)

    @property
    def count(self) -> int:
        return sum(self.bits)

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.bits) if b)

    def flip(self, i: int) -> "FeatureMask":
        bits = list(self.bits)
        bits[i] = 1 - bits[i]
        return FeatureMask(tuple(bits))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


def check_mask(d: Dataset, mask: FeatureMask, *, require_nonempty: bool = False) -> None:
    """Boundary check used by every module that accepts a mask."""
    if mask.width != d.n_features:
        raise MaskError(
            f"mask width {mask.width} does not match feature count {d.n_features}"
        )
    if require_nonempty and mask.count == 0:
        raise MaskError("mask selects no features")


@dataclass(frozen=True)
class DiscretizationSpec:
    """Equal-width binning applied to numeric features before categorical measures."""

    bins: int = 10

    def __post_init__(self):
        if self.bins < 2:
            raise DataError("discretization needs at least 2 bins")


def infer_task(d: Dataset) -> TaskKind:
    """Classification iff the class column is categorical."""
    if isinstance(d.class_column, CategoricalColumn):
        return TaskKind.CLASSIFICATION
    return TaskKind.REGRESSION


def _looks_numeric(cell: str) -> bool:
    try:
        return math.isfinite(float(cell))
    except ValueError:
        return False


def load_csv(
    path: str | os.PathLike,
    class_name: str,
    type_hints: Mapping[str, str] | None = None,
) -> Dataset:
    """Load an RFC-4180-style CSV with a header row.

    Columns where every cell parses as a finite number become numeric; all
    others become categorical with levels ordered by first appearance.
    ``type_hints`` maps column names to ``"numeric"`` or ``"categorical"``
    and overrides the inference.  Empty cells are rejected: missing values
    are an error, not imputed.
    """
    hints = dict(type_hints or {})
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise DataError(f"cannot open {os.fspath(path)!r}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError("empty file") from None
        rows = list(reader)
    if class_name not in header:
        raise DataError(f"class column {class_name!r} not in header {header}")
    if not rows:
        raise DataError("no data rows")
    cells: list[list[str]] = [[] for _ in header]
    for r, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise DataError(
                f"row {r}: expected {len(header)} fields, found {len(row)}"
            )
        for j, cell in enumerate(row):
            if cell == "":
                raise DataError(f"row {r}, column {header[j]!r}: empty cell")
            cells[j].append(cell)
    for name in hints:
        if name not in header:
            raise DataError(f"type hint for unknown column {name!r}")
        if hints[name] not in ("numeric", "categorical"):
            raise DataError(f"type hint for {name!r} must be numeric|categorical")

    columns: list[Column] = []
    for j, name in enumerate(header):
        kind = hints.get(name)
        if kind is None:
            kind = "numeric" if all(_looks_numeric(c) for c in cells[j]) else "categorical"
        if kind == "numeric":
            if not all(_looks_numeric(c) for c in cells[j]):
                bad = next(i for i, c in enumerate(cells[j]) if not _looks_numeric(c))
                raise DataError(
                    f"row {bad + 2}, column {name!r}: not a finite number"
                )
            columns.append(
                NumericColumn(name, np.array([float(c) for c in cells[j]]))
            )
        else:
            columns.append(categorical_from_strings(name, cells[j]))
    return Dataset(tuple(columns), class_name)


def write_csv(d: Dataset, path: str | os.PathLike) -> None:
    """Write a dataset back out; numeric cells use shortest round-trip repr."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([c.name for c in d.columns])
        for i in range(d.n_rows):
            row = []
            for c in d.columns:
                if isinstance(c, NumericColumn):
                    row.append(repr(float(c.values[i])))
                else:
                    row.append(c.levels[c.codes[i]])
            writer.writerow(row)


def _interval_name(lo: float, hi: float, closed_left: bool) -> str:
    left = "[" if closed_left else "("
    return f"{left}{lo:g},{hi:g}]"


def discretize_column(col: NumericColumn, spec: DiscretizationSpec) -> CategoricalColumn:
    """Equal-width binning of one numeric column.

    Intervals are right-closed; the first interval is closed on both ends, so
    the minimum lands in bin 0 and the maximum in the last bin.  Only
    intervals that contain data become levels, in ascending interval order.
    A constant column collapses to a single level.
    """
    values = col.values
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        return CategoricalColumn(col.name, (_interval_name(lo, hi, True),), np.zeros(len(values), dtype=np.int64))
    edges = np.linspace(lo, hi, spec.bins + 1)
    raw = np.digitize(values, edges[1:-1], right=True)
    observed = np.unique(raw)
    remap = {int(b): i for i, b in enumerate(observed)}
    codes = np.array([remap[int(b)] for b in raw], dtype=np.int64)
    names = tuple(
        _interval_name(float(edges[b]), float(edges[b + 1]), b == 0)
        for b in observed
    )
    return CategoricalColumn(col.name, names, codes)


def discretize(d: Dataset, spec: DiscretizationSpec = DiscretizationSpec()) -> Dataset:
    """Replace every numeric feature column by its equal-width binning.

    The class column is left untouched.  A dataset with no numeric features
    is returned unchanged (same object), which makes the operation idempotent.
    """
    if not any(
        isinstance(c, NumericColumn) for c in d.feature_columns
    ):
        return d
    cols: list[Column] = []
    for c in d.columns:
        if c.name != d.class_name and isinstance(c, NumericColumn):
            cols.append(discretize_column(c, spec))
        else:
            cols.append(c)
    return Dataset(tuple(cols), d.class_name)


def standardize(d: Dataset, features: FeatureMask) -> Dataset:
    """Center and scale the masked columns to mean 0, population sd 1.

    Zero-variance columns become all-zero.  Selecting a categorical column is
    an error.
    """
    check_mask(d, features)
    selected = {d.feature_names[i] for i in features.indices()}
    cols: list[Column] = []
    for c in d.columns:
        if c.name in selected:
            if not isinstance(c, NumericColumn):
                raise MeasureError(f"cannot standardize categorical column {c.name!r}")
            mean = float(c.values.mean())
            sd = float(c.values.std())
            if sd == 0.0:
                cols.append(NumericColumn(c.name, np.zeros_like(c.values)))
            else:
                cols.append(NumericColumn(c.name, (c.values - mean) / sd))
        else:
            cols.append(c)
    return Dataset(tuple(cols), d.class_name)


def mask_to_names(d: Dataset, m: FeatureMask) -> list[str]:
    """Names of the set bits, in column order."""
    check_mask(d, m)
    names = d.feature_names
    return [names[i] for i in m.indices()]

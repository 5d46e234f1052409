"""Shared table machinery for the categorical measures.

Categorical measures see every feature as integer codes: categorical columns
contribute their codes directly, numeric columns are first put through the
equal-width binning from :mod:`featsel.dataset`.  The code matrix for a
(dataset, bins) pair is cached per dataset object, since a search evaluates
thousands of masks against the same data.
"""

from __future__ import annotations

import weakref

import numpy as np

from ..dataset import (
    CategoricalColumn,
    Dataset,
    DiscretizationSpec,
    NumericColumn,
    discretize_column,
    infer_task,
    TaskKind,
)
from ..errors import MeasureError

_CODES_CACHE: "weakref.WeakKeyDictionary[Dataset, dict]" = weakref.WeakKeyDictionary()


def feature_codes(d: Dataset, bins: int) -> np.ndarray:
    """(n_rows, n_features) int64 matrix of per-feature category codes."""
    per_dataset = _CODES_CACHE.setdefault(d, {})
    cached = per_dataset.get(bins)
    if cached is not None:
        return cached
    spec = DiscretizationSpec(bins)
    cols = []
    for c in d.feature_columns:
        if isinstance(c, NumericColumn):
            cols.append(discretize_column(c, spec).codes)
        else:
            cols.append(c.codes)
    matrix = np.column_stack(cols) if cols else np.empty((d.n_rows, 0), dtype=np.int64)
    per_dataset[bins] = matrix
    return matrix


def class_codes(d: Dataset) -> tuple[np.ndarray, int]:
    """Class column as integer codes plus the class count; classification only."""
    if infer_task(d) is not TaskKind.CLASSIFICATION:
        raise MeasureError("measure requires a classification task")
    col = d.class_column
    assert isinstance(col, CategoricalColumn)
    return col.codes, len(col.levels)


def joint_pattern_ids(codes: np.ndarray, columns: tuple[int, ...]) -> tuple[np.ndarray, int]:
    """Collapse the selected code columns into dense joint-pattern ids.

    Folds one column at a time and renumbers through ``np.unique`` so the ids
    stay bounded by the row count regardless of feature count or arity.
    """
    ids = codes[:, columns[0]]
    ids = np.unique(ids, return_inverse=True)[1]
    for j in columns[1:]:
        col = codes[:, j]
        ids = np.unique(ids * (int(col.max()) + 1) + col, return_inverse=True)[1]
    return ids, int(ids.max()) + 1


def contingency(
    pattern_ids: np.ndarray, n_patterns: int, classes: np.ndarray, n_classes: int
) -> np.ndarray:
    """(n_patterns, n_classes) joint count table."""
    flat = np.bincount(
        pattern_ids * n_classes + classes, minlength=n_patterns * n_classes
    )
    return flat.reshape(n_patterns, n_classes)


def entropy_bits(counts: np.ndarray) -> float:
    """Plug-in entropy in bits from a vector of non-negative counts.

    Counts are sorted before summation so that permutations of the same count
    multiset produce bit-identical results.
    """
    counts = np.sort(counts[counts > 0])
    n = counts.sum()
    if n == 0 or len(counts) <= 1:
        return 0.0
    return float(np.log2(n) - np.dot(counts, np.log2(counts)) / n)

"""Individual feature measures: chi-squared, Cramer V, Fisher score, Relief."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..dataset import (
    CategoricalColumn,
    Dataset,
    NumericColumn,
    infer_task,
    TaskKind,
)
from ..errors import MeasureError
from ..rng import spawn_rng
from .base import IndividualMeasure, MeasureDescriptor, MeasureKind, ScoreVector
from .tables import class_codes, contingency, feature_codes

FISHER_EPS = 1e-12


def _require_classification(d: Dataset, name: str) -> None:
    if infer_task(d) is not TaskKind.CLASSIFICATION:
        raise MeasureError(f"{name} applies to classification tasks only")


def _chi2_statistic(table: np.ndarray) -> float:
    """Pearson chi-squared without Yates correction; empty expected cells add 0."""
    n = table.sum()
    row = table.sum(axis=1, keepdims=True)
    col = table.sum(axis=0, keepdims=True)
    expected = row * col / n
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(expected > 0, (table - expected) ** 2 / expected, 0.0)
    return float(terms.sum())


class ChiSquared(IndividualMeasure):
    """Independence statistic between one (discretized) feature and the class."""

    def __init__(self, bins: int = 10):
        self.bins = bins
        self.descriptor = MeasureDescriptor("chiSquared", True, MeasureKind.INDIVIDUAL)

    def _tables(self, d: Dataset, names: list[str]):
        _require_classification(d, self.descriptor.name)
        codes = feature_codes(d, self.bins)
        classes, n_classes = class_codes(d)
        index = {n: i for i, n in enumerate(d.feature_names)}
        for name in names:
            col = codes[:, index[name]]
            table = contingency(col, int(col.max()) + 1, classes, n_classes)
            # drop empty rows/columns so degenerate dimensions are visible
            table = table[table.sum(axis=1) > 0][:, table.sum(axis=0) > 0]
            yield name, table

    def score_features(self, d: Dataset, features: Sequence[str] | None = None) -> ScoreVector:
        names = self._resolve_features(d, features)
        entries = [(n, _chi2_statistic(t)) for n, t in self._tables(d, names)]
        return ScoreVector(tuple(entries))


class CramerV(ChiSquared):
    """Chi-squared normalized to [0, 1]; degenerate tables score 0."""

    def __init__(self, bins: int = 10):
        super().__init__(bins)
        self.descriptor = MeasureDescriptor("cramerV", True, MeasureKind.INDIVIDUAL)

    def score_features(self, d: Dataset, features: Sequence[str] | None = None) -> ScoreVector:
        names = self._resolve_features(d, features)
        entries = []
        for name, table in self._tables(d, names):
            r, c = table.shape
            denom = table.sum() * min(r - 1, c - 1)
            if denom == 0:
                entries.append((name, 0.0))
            else:
                entries.append((name, float(np.sqrt(_chi2_statistic(table) / denom))))
        return ScoreVector(tuple(entries))


class FisherScore(IndividualMeasure):
    """Between-class over within-class scatter of a numeric feature.

    numerator = sum_c n_c (mu_c - mu)^2, denominator = sum_c n_c sigma_c^2
    (population variance), floored at ``FISHER_EPS`` so perfectly separated
    features yield a large finite value instead of dividing by zero.
    """

    def __init__(self):
        self.descriptor = MeasureDescriptor("fScore", True, MeasureKind.INDIVIDUAL)

    def score_features(self, d: Dataset, features: Sequence[str] | None = None) -> ScoreVector:
        names = self._resolve_features(d, features)
        _require_classification(d, self.descriptor.name)
        classes, n_classes = class_codes(d)
        entries = []
        for name in names:
            col = d.column(name)
            if not isinstance(col, NumericColumn):
                raise MeasureError(f"fScore requires numeric features, {name!r} is categorical")
            x = col.values
            mu = x.mean()
            numer = 0.0
            denom = 0.0
            for c in range(n_classes):
                xc = x[classes == c]
                if len(xc) == 0:
                    continue
                numer += len(xc) * (xc.mean() - mu) ** 2
                denom += len(xc) * xc.var()
            entries.append((name, float(numer / max(denom, FISHER_EPS))))
        return ScoreVector(tuple(entries))


class Relief(IndividualMeasure):
    """Contextual feature weighting from nearest-hit / nearest-miss contrasts.

    For each sampled row, the weight of a feature grows by its distance to the
    nearest miss and shrinks by its distance to the nearest hit, averaged over
    the sample.  Numeric differences are range-normalized, categorical ones
    are 0/1, and row distances are Manhattan sums over all features.  With
    ``sample_size=None`` every row is used in order, making the result
    deterministic (neighbour ties break toward the lowest row index).
    """

    def __init__(self, neighbors: int = 1, sample_size: int | None = None, seed: int = 0):
        if neighbors < 1:
            raise MeasureError("relief needs at least one neighbour")
        self.neighbors = neighbors
        self.sample_size = sample_size
        self.seed = seed
        self.descriptor = MeasureDescriptor("relief", True, MeasureKind.INDIVIDUAL)

    def _diff_columns(self, d: Dataset) -> list[np.ndarray]:
        """Per-feature pairwise difference matrices, each n_rows x n_rows in [0,1]."""
        diffs = []
        for col in d.feature_columns:
            if isinstance(col, NumericColumn):
                span = float(col.values.max() - col.values.min())
                if span == 0.0:
                    diffs.append(np.zeros((len(col), len(col))))
                else:
                    v = col.values
                    diffs.append(np.abs(v[:, None] - v[None, :]) / span)
            else:
                c = col.codes
                diffs.append((c[:, None] != c[None, :]).astype(np.float64))
        return diffs

    def score_features(self, d: Dataset, features: Sequence[str] | None = None) -> ScoreVector:
        names = self._resolve_features(d, features)
        _require_classification(d, self.descriptor.name)
        classes, n_classes = class_codes(d)
        if n_classes < 2:
            raise MeasureError("relief needs at least two classes")
        n = d.n_rows
        diffs = self._diff_columns(d)
        distance = np.zeros((n, n))
        for m in diffs:
            distance += m

        if self.sample_size is None:
            sample = np.arange(n)
        else:
            rng = spawn_rng(self.seed)
            sample = rng.integers(0, n, size=self.sample_size)

        weights = np.zeros(d.n_features)
        k = self.neighbors
        for x in sample:
            same = np.flatnonzero((classes == classes[x]) & (np.arange(n) != x))
            other = np.flatnonzero(classes != classes[x])
            if len(same) == 0:
                raise MeasureError(
                    f"row {x}: its class has no other instance, no nearest hit exists"
                )
            hits = same[np.argsort(distance[x, same], kind="stable")][:k]
            misses = other[np.argsort(distance[x, other], kind="stable")][:k]
            for f, m in enumerate(diffs):
                weights[f] += m[x, misses].mean() - m[x, hits].mean()
        weights /= len(sample)

        index = {nm: i for i, nm in enumerate(d.feature_names)}
        return ScoreVector(tuple((nm, float(weights[index[nm]])) for nm in names))

"""Feature-set measures: consistency family, information family, R-squared.

All categorical measures run on the discretized view of the data (see
:mod:`featsel.measures.tables`); the determination coefficient works on raw
numeric values.  Every measure here maximizes.
"""

from __future__ import annotations

import numpy as np

from ..dataset import (
    Dataset,
    FeatureMask,
    NumericColumn,
    infer_task,
    TaskKind,
)
from ..errors import MeasureError
from .base import MeasureDescriptor, MeasureKind, SetMeasure, checked_mask
from .tables import class_codes, contingency, entropy_bits, feature_codes, joint_pattern_ids


class _CategoricalSetMeasure(SetMeasure):
    """Shared plumbing: mask checks, discretized pattern/class tables."""

    def __init__(self, name: str, bins: int = 10):
        self.bins = bins
        self.descriptor = MeasureDescriptor(name, True, MeasureKind.SET)

    def _table(self, d: Dataset, mask: FeatureMask) -> np.ndarray:
        checked_mask(d, mask)
        classes, n_classes = class_codes(d)
        codes = feature_codes(d, self.bins)
        ids, n_patterns = joint_pattern_ids(codes, mask.indices())
        return contingency(ids, n_patterns, classes, n_classes)

    def evaluate(self, d: Dataset, mask: FeatureMask) -> float:
        return self._from_table(self._table(d, mask))

    def _from_table(self, table: np.ndarray) -> float:
        raise NotImplementedError


class BinaryConsistency(_CategoricalSetMeasure):
    """1.0 when no two rows share the masked pattern with different classes."""

    def __init__(self, bins: int = 10):
        super().__init__("binaryConsistency", bins)

    def _from_table(self, table: np.ndarray) -> float:
        pure = (table > 0).sum(axis=1) <= 1
        return 1.0 if bool(pure.all()) else 0.0


class IEConsistency(_CategoricalSetMeasure):
    """One minus the fraction of rows outside their pattern's majority class."""

    def __init__(self, bins: int = 10):
        super().__init__("IEConsistency", bins)

    def _from_table(self, table: np.ndarray) -> float:
        inconsistent = int((table.sum(axis=1) - table.max(axis=1)).sum())
        return 1.0 - inconsistent / table.sum()


class IEPConsistency(_CategoricalSetMeasure):
    """One minus the class-discordant share of same-pattern row pairs.

    Defined as 1.0 when no two rows share a pattern (no pairs to disagree).
    """

    def __init__(self, bins: int = 10):
        super().__init__("IEPConsistency", bins)

    def _from_table(self, table: np.ndarray) -> float:
        sizes = table.sum(axis=1)
        total_pairs = int((sizes * (sizes - 1) // 2).sum())
        if total_pairs == 0:
            return 1.0
        concordant = int((table * (table - 1) // 2).sum())
        return 1.0 - (total_pairs - concordant) / total_pairs


class RoughsetConsistency(_CategoricalSetMeasure):
    """Dependency degree: the fraction of rows in class-pure pattern groups."""

    def __init__(self, bins: int = 10):
        super().__init__("roughsetConsistency", bins)

    def _from_table(self, table: np.ndarray) -> float:
        sizes = table.sum(axis=1)
        pure = (table > 0).sum(axis=1) <= 1
        return float(sizes[pure].sum() / sizes.sum())


class MutualInformation(_CategoricalSetMeasure):
    """I(S;C) in bits between the joint masked pattern and the class."""

    def __init__(self, bins: int = 10):
        super().__init__("mutualInformation", bins)

    def _from_table(self, table: np.ndarray) -> float:
        n = table.sum()
        h_class = entropy_bits(table.sum(axis=0))
        h_cond = sum(
            row.sum() / n * entropy_bits(row) for row in table if row.sum() > 0
        )
        return float(min(max(h_class - h_cond, 0.0), h_class))


class GainRatio(_CategoricalSetMeasure):
    """I(S;C) normalized by the joint entropy H(S); 0 when H(S) is 0."""

    def __init__(self, bins: int = 10):
        super().__init__("gainRatio", bins)

    def _from_table(self, table: np.ndarray) -> float:
        h_s = entropy_bits(table.sum(axis=1))
        if h_s == 0.0:
            return 0.0
        mi = MutualInformation._from_table(self, table)
        return float(min(mi / h_s, 1.0))


class SymmetricalUncertainty(_CategoricalSetMeasure):
    """2 I(S;C) / (H(S) + H(C)); 0 when both entropies vanish."""

    def __init__(self, bins: int = 10):
        super().__init__("symmetricalUncertainty", bins)

    def _from_table(self, table: np.ndarray) -> float:
        denom = entropy_bits(table.sum(axis=1)) + entropy_bits(table.sum(axis=0))
        if denom == 0.0:
            return 0.0
        mi = MutualInformation._from_table(self, table)
        return float(min(2.0 * mi / denom, 1.0))


class GiniIndex(_CategoricalSetMeasure):
    """Pattern purity: sum_v p(v) sum_c p(c|v)^2, 1.0 iff every pattern is pure."""

    def __init__(self, bins: int = 10):
        super().__init__("giniIndex", bins)

    def _from_table(self, table: np.ndarray) -> float:
        n = table.sum()
        sizes = table.sum(axis=1)
        keep = sizes > 0
        return float(((table[keep] ** 2).sum(axis=1) / sizes[keep]).sum() / n)


class DeterminationCoefficient(SetMeasure):
    """R-squared of an ordinary least-squares fit of the class on the subset.

    Regression tasks only; masked features must be numeric and are used raw.
    Rank-deficient designs are solved in the minimum-norm sense.
    """

    def __init__(self):
        self.descriptor = MeasureDescriptor("determinationCoefficient", True, MeasureKind.SET)

    def evaluate(self, d: Dataset, mask: FeatureMask) -> float:
        checked_mask(d, mask)
        if infer_task(d) is not TaskKind.REGRESSION:
            raise MeasureError("determinationCoefficient applies to regression tasks only")
        target = d.class_column
        assert isinstance(target, NumericColumn)
        y = target.values
        sst = float(((y - y.mean()) ** 2).sum())
        if sst == 0.0:
            raise MeasureError("constant class column: R^2 is undefined")
        cols = []
        for i in mask.indices():
            col = d.feature_columns[i]
            if not isinstance(col, NumericColumn):
                raise MeasureError(
                    f"determinationCoefficient requires numeric features, {col.name!r} is categorical"
                )
            cols.append(col.values)
        design = np.column_stack([np.ones(d.n_rows)] + cols)
        beta, *_ = np.linalg.lstsq(design, y, rcond=None)
        sse = float(((y - design @ beta) ** 2).sum())
        return float(min(max(1.0 - sse / sst, 0.0), 1.0))

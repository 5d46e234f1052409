"""Wrapper evaluation: learner + cross-validation compiled into a set measure.

A :class:`WrapperEvaluator` behaves exactly like any other set measure: it
restricts the dataset to the masked features, runs every hyperparameter grid
point through k-fold cross-validation, and reports the best grid point's mean
metric.  Two learners are built in: k-nearest-neighbours (classification and
regression) and a zero baseline (majority class / mean target).

Fold assignment is seeded and deterministic: row indices are shuffled once
with Fisher-Yates, then dealt round-robin into folds, within each class level
when stratified.  Preprocessing statistics (center/scale) are fitted on each
training split only.  Per-feature squared-difference tables are cached per
fold, so evaluating many masks against one dataset shares the expensive part
of the distance computation; the arithmetic is identical either way.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .dataset import (
    CategoricalColumn,
    Dataset,
    FeatureMask,
    NumericColumn,
    TaskKind,
    infer_task,
)
from .errors import ConfigError, MeasureError
from .measures.base import MeasureDescriptor, MeasureKind, SetMeasure, checked_mask
from .rng import STREAM_CV, fisher_yates, spawn_rng

LEARNERS = ("knn", "zero-baseline")
METRICS = {"Accuracy": True, "RMSE": False}  # name -> maximize

# Per-feature fold tables are cached only below this many float64 entries.
_CACHE_LIMIT = 8_000_000


@dataclass(frozen=True)
class LearnerSpec:
    algorithm: str
    task: TaskKind

    def __post_init__(self):
        if self.algorithm not in LEARNERS:
            raise ConfigError(f"unknown learner {self.algorithm!r}; available: {LEARNERS}")


@dataclass(frozen=True)
class ResamplingSpec:
    method: str = "cv"
    folds: int = 10
    stratified: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.method != "cv":
            raise ConfigError(f"unsupported resampling method {self.method!r}")
        if self.folds < 2:
            raise ConfigError("cross-validation needs at least 2 folds")


@dataclass(frozen=True)
class FitSpec:
    preprocess: tuple[str, ...] = ("center", "scale")
    metric: str = "Accuracy"
    grid: tuple[Mapping, ...] = ({},)

    def __post_init__(self):
        bad = set(self.preprocess) - {"center", "scale"}
        if bad:
            raise ConfigError(f"unknown preprocessing steps: {sorted(bad)}")
        if self.metric not in METRICS:
            raise ConfigError(f"unknown metric {self.metric!r}; available: {sorted(METRICS)}")
        if not self.grid:
            raise ConfigError("hyperparameter grid must be non-empty")
        object.__setattr__(self, "grid", tuple(dict(g) for g in self.grid))
        object.__setattr__(self, "preprocess", tuple(self.preprocess))

    @property
    def maximize(self) -> bool:
        return METRICS[self.metric]


def knn_grid(k_values: Sequence[int]) -> tuple[dict, ...]:
    return tuple({"k": int(k)} for k in k_values)


# ---------------------------------------------------------------------------
# fold assignment


def fold_assignments(d: Dataset, resampling: ResamplingSpec) -> list[np.ndarray]:
    """Validation-row indices per fold; deterministic in the resampling seed."""
    if resampling.folds > d.n_rows:
        raise ConfigError(
            f"{resampling.folds} folds exceed the {d.n_rows} available rows"
        )
    rng = spawn_rng(resampling.seed, STREAM_CV)
    order = fisher_yates(range(d.n_rows), rng)
    folds: list[list[int]] = [[] for _ in range(resampling.folds)]
    if resampling.stratified and infer_task(d) is TaskKind.CLASSIFICATION:
        classes = d.class_column.codes
        n_levels = len(d.class_column.levels)
        for level in range(n_levels):
            rows = [i for i in order if classes[i] == level]
            for pos, row in enumerate(rows):
                folds[pos % resampling.folds].append(row)
    else:
        for pos, row in enumerate(order):
            folds[pos % resampling.folds].append(row)
    return [np.array(f, dtype=np.int64) for f in folds]


_FOLD_CACHE: "weakref.WeakKeyDictionary[Dataset, dict]" = weakref.WeakKeyDictionary()


def _cached_folds(d: Dataset, resampling: ResamplingSpec) -> list[np.ndarray]:
    per_dataset = _FOLD_CACHE.setdefault(d, {})
    key = (resampling.folds, resampling.stratified, resampling.seed)
    if key not in per_dataset:
        per_dataset[key] = fold_assignments(d, resampling)
    return per_dataset[key]


# ---------------------------------------------------------------------------
# preprocessing


def _train_stats(train: np.ndarray, preprocess: tuple[str, ...]) -> tuple[np.ndarray, np.ndarray]:
    """Per-column (offset, scale) fitted on the training block only."""
    n_cols = train.shape[1]
    offset = train.mean(axis=0) if "center" in preprocess else np.zeros(n_cols)
    scale = train.std(axis=0) if "scale" in preprocess else np.ones(n_cols)
    return offset, scale


def _apply_stats(block: np.ndarray, offset: np.ndarray, scale: np.ndarray) -> np.ndarray:
    out = block - offset
    nonzero = scale != 0
    out[:, nonzero] = out[:, nonzero] / scale[nonzero]
    out[:, ~nonzero] = 0.0  # zero-variance columns collapse to 0, as standardize does
    return out


def fold_preprocess_stats(
    d: Dataset, resampling: ResamplingSpec, preprocess: tuple[str, ...] = ("center", "scale")
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Fitted (offset, scale) per fold over all numeric features.

    Exposed so tests can demonstrate that validation rows never influence the
    fitted statistics.
    """
    numeric = [c.values for c in d.feature_columns if isinstance(c, NumericColumn)]
    matrix = np.column_stack(numeric) if numeric else np.empty((d.n_rows, 0))
    folds = _cached_folds(d, resampling)
    all_rows = np.arange(d.n_rows)
    stats = []
    for val_idx in folds:
        train_idx = np.setdiff1d(all_rows, val_idx)
        stats.append(_train_stats(matrix[train_idx], preprocess))
    return stats


# ---------------------------------------------------------------------------
# the k-nearest-neighbours learner


def knn_predict(
    train_x: np.ndarray,
    train_y: np.ndarray,
    test_x: np.ndarray,
    k: int,
    *,
    classification: bool,
    n_classes: int | None = None,
    train_cat: np.ndarray | None = None,
    test_cat: np.ndarray | None = None,
) -> np.ndarray:
    """Predict test rows from their k nearest training rows.

    Distance is Euclidean over the numeric columns plus a 0/1 mismatch term
    per categorical column.  Distance ties prefer the lower training-row
    index; vote ties prefer the class with the lower level code.  ``k`` is
    clamped to the training size.
    """
    if len(train_x) == 0:
        raise MeasureError("empty training set")
    terms = []
    for j in range(train_x.shape[1]):
        diff = test_x[:, j][:, None] - train_x[:, j][None, :]
        terms.append(diff * diff)
    if train_cat is not None and train_cat.shape[1]:
        for j in range(train_cat.shape[1]):
            terms.append(
                (test_cat[:, j][:, None] != train_cat[:, j][None, :]).astype(np.float64)
            )
    grid = _knn_grid_from_terms(
        terms, np.asarray(train_y), [int(k)],
        classification=classification, n_classes=n_classes,
        n_test=len(test_x), n_train=len(train_x),
    )
    return grid[0]


def _knn_grid_from_terms(
    terms: Sequence[np.ndarray],
    train_y: np.ndarray,
    ks: Sequence[int],
    *,
    classification: bool,
    n_classes: int | None,
    n_test: int,
    n_train: int,
) -> list[np.ndarray]:
    """Predictions for every k in ``ks`` from shared squared-distance terms."""
    dist = np.zeros((n_test, n_train))
    for t in terms:
        dist += t
    order = np.argsort(dist, axis=1, kind="stable")
    ordered_y = train_y[order]
    preds = []
    if classification:
        if n_classes is None:
            n_classes = int(train_y.max()) + 1
        onehot = np.zeros((n_test, n_train, n_classes))
        rows = np.arange(n_test)[:, None]
        cols = np.arange(n_train)[None, :]
        onehot[rows, cols, ordered_y] = 1.0
        votes = onehot.cumsum(axis=1)
        for k in ks:
            kk = min(k, n_train)
            preds.append(votes[:, kk - 1, :].argmax(axis=1))
    else:
        sums = ordered_y.cumsum(axis=1)
        for k in ks:
            kk = min(k, n_train)
            preds.append(sums[:, kk - 1] / kk)
    return preds


# ---------------------------------------------------------------------------
# encoded dataset views and per-fold term caches


@dataclass
class _Encoded:
    """Dataset features split into a numeric matrix and categorical codes."""

    numeric: np.ndarray          # (n_rows, n_numeric)
    categorical: np.ndarray      # (n_rows, n_categorical) int codes
    numeric_of: dict[int, int]   # feature index -> numeric column
    categorical_of: dict[int, int]
    target: np.ndarray           # class codes or numeric target
    n_classes: int | None


_ENCODED_CACHE: "weakref.WeakKeyDictionary[Dataset, _Encoded]" = weakref.WeakKeyDictionary()


def _encoded(d: Dataset) -> _Encoded:
    enc = _ENCODED_CACHE.get(d)
    if enc is not None:
        return enc
    numeric, categorical = [], []
    numeric_of, categorical_of = {}, {}
    for i, col in enumerate(d.feature_columns):
        if isinstance(col, NumericColumn):
            numeric_of[i] = len(numeric)
            numeric.append(col.values)
        else:
            categorical_of[i] = len(categorical)
            categorical.append(col.codes)
    cls = d.class_column
    if isinstance(cls, CategoricalColumn):
        target, n_classes = cls.codes, len(cls.levels)
    else:
        target, n_classes = cls.values, None
    enc = _Encoded(
        numeric=np.column_stack(numeric) if numeric else np.empty((d.n_rows, 0)),
        categorical=np.column_stack(categorical) if categorical else np.empty((d.n_rows, 0), dtype=np.int64),
        numeric_of=numeric_of,
        categorical_of=categorical_of,
        target=target,
        n_classes=n_classes,
    )
    _ENCODED_CACHE[d] = enc
    return enc


@dataclass
class _FoldView:
    train_idx: np.ndarray
    val_idx: np.ndarray
    train_num: np.ndarray   # preprocessed numeric block
    val_num: np.ndarray
    train_cat: np.ndarray
    val_cat: np.ndarray
    y_train: np.ndarray
    y_val: np.ndarray
    terms: dict[int, np.ndarray] = field(default_factory=dict)
    cacheable: bool = True

    def term(self, feature: int, enc: _Encoded) -> np.ndarray:
        """Squared-difference (numeric) or mismatch (categorical) table."""
        cached = self.terms.get(feature)
        if cached is not None:
            return cached
        if feature in enc.numeric_of:
            j = enc.numeric_of[feature]
            diff = self.val_num[:, j][:, None] - self.train_num[:, j][None, :]
            out = diff * diff
        else:
            j = enc.categorical_of[feature]
            out = (
                self.val_cat[:, j][:, None] != self.train_cat[:, j][None, :]
            ).astype(np.float64)
        if self.cacheable:
            self.terms[feature] = out
        return out


_VIEW_CACHE: "weakref.WeakKeyDictionary[Dataset, dict]" = weakref.WeakKeyDictionary()


def _fold_views(d: Dataset, resampling: ResamplingSpec, preprocess: tuple[str, ...]) -> list[_FoldView]:
    per_dataset = _VIEW_CACHE.setdefault(d, {})
    key = (resampling.folds, resampling.stratified, resampling.seed, preprocess)
    views = per_dataset.get(key)
    if views is not None:
        return views
    enc = _encoded(d)
    folds = _cached_folds(d, resampling)
    all_rows = np.arange(d.n_rows)
    n_features = d.n_features
    total_cells = sum(
        len(v) * (d.n_rows - len(v)) * n_features for v in folds
    )
    cacheable = total_cells <= _CACHE_LIMIT
    views = []
    for val_idx in folds:
        train_idx = np.setdiff1d(all_rows, val_idx)
        if len(train_idx) == 0:
            raise MeasureError("a fold has an empty training split")
        train_num = enc.numeric[train_idx]
        val_num = enc.numeric[val_idx]
        if train_num.shape[1]:
            offset, scale = _train_stats(train_num, preprocess)
            train_num = _apply_stats(train_num.copy(), offset, scale)
            val_num = _apply_stats(val_num.copy(), offset, scale)
        views.append(
            _FoldView(
                train_idx=train_idx,
                val_idx=val_idx,
                train_num=train_num,
                val_num=val_num,
                train_cat=enc.categorical[train_idx],
                val_cat=enc.categorical[val_idx],
                y_train=enc.target[train_idx],
                y_val=enc.target[val_idx],
                cacheable=cacheable,
            )
        )
    per_dataset[key] = views
    return views


# ---------------------------------------------------------------------------
# cross-validated evaluation


def _fold_metric(pred: np.ndarray, truth: np.ndarray, metric: str) -> float:
    if metric == "Accuracy":
        return float(np.mean(pred == truth))
    return float(np.sqrt(np.mean((pred - truth) ** 2)))


def grid_cv_scores(
    d: Dataset,
    mask: FeatureMask,
    learner: LearnerSpec,
    resampling: ResamplingSpec,
    fitting: FitSpec,
    *,
    clamp_log: list | None = None,
) -> list[float]:
    """Mean cross-validated metric for every grid point, sharing fold work."""
    checked_mask(d, mask)
    task = infer_task(d)
    if task is not learner.task:
        raise MeasureError(
            f"learner expects a {learner.task.value} task, data is {task.value}"
        )
    if (fitting.metric == "Accuracy") != (task is TaskKind.CLASSIFICATION):
        raise MeasureError(f"metric {fitting.metric!r} does not fit a {task.value} task")
    classification = task is TaskKind.CLASSIFICATION
    enc = _encoded(d)
    views = _fold_views(d, resampling, fitting.preprocess)
    selected = mask.indices()

    if learner.algorithm == "zero-baseline":
        per_fold: list[float] = []
        for view in views:
            if len(view.val_idx) == 0:
                continue
            if classification:
                counts = np.bincount(view.y_train, minlength=enc.n_classes)
                pred = np.full(len(view.val_idx), counts.argmax())
            else:
                pred = np.full(len(view.val_idx), view.y_train.mean())
            per_fold.append(_fold_metric(pred, view.y_val, fitting.metric))
        return [float(np.mean(per_fold))] * len(fitting.grid)

    ks = []
    for point in fitting.grid:
        if "k" not in point or int(point["k"]) < 1:
            raise ConfigError(f"knn grid point {point!r} needs a positive integer k")
        ks.append(int(point["k"]))
    sums = np.zeros(len(ks))
    used = 0
    for view in views:
        if len(view.val_idx) == 0:
            continue
        used += 1
        if clamp_log is not None and max(ks) > len(view.train_idx):
            clamp_log.append(
                {"fold_train_size": int(len(view.train_idx)), "k_requested": int(max(ks))}
            )
        terms = [view.term(f, enc) for f in selected]
        preds = _knn_grid_from_terms(
            terms,
            view.y_train,
            ks,
            classification=classification,
            n_classes=enc.n_classes,
            n_test=len(view.val_idx),
            n_train=len(view.train_idx),
        )
        for i, pred in enumerate(preds):
            sums[i] += _fold_metric(pred, view.y_val, fitting.metric)
    return [float(s / used) for s in sums]


def cross_validate(
    d: Dataset,
    mask: FeatureMask,
    learner: LearnerSpec,
    hyper: Mapping,
    resampling: ResamplingSpec,
    fitting: FitSpec,
) -> float:
    """Mean CV metric of a single hyperparameter assignment."""
    single = FitSpec(preprocess=fitting.preprocess, metric=fitting.metric, grid=(dict(hyper),))
    return grid_cv_scores(d, mask, learner, resampling, single)[0]


class WrapperEvaluator(SetMeasure):
    """A learner + resampling + fitting spec, usable as a set measure."""

    def __init__(self, learner: LearnerSpec, resampling: ResamplingSpec, fitting: FitSpec):
        if (fitting.metric == "Accuracy") != (learner.task is TaskKind.CLASSIFICATION):
            raise ConfigError(
                f"metric {fitting.metric!r} does not fit a {learner.task.value} learner"
            )
        self.learner = learner
        self.resampling = resampling
        self.fitting = fitting
        self.clamp_events: list[dict] = []
        self.descriptor = MeasureDescriptor(
            f"wrapper({learner.algorithm})", fitting.maximize, MeasureKind.SET
        )

    def evaluate(self, d: Dataset, mask: FeatureMask) -> float:
        scores = grid_cv_scores(
            d, mask, self.learner, self.resampling, self.fitting, clamp_log=self.clamp_events
        )
        best = max(scores) if self.fitting.maximize else min(scores)
        return float(best)

    def grid_scores(self, d: Dataset, mask: FeatureMask) -> list[float]:
        """Per-grid-point CV scores (same order as the grid)."""
        return grid_cv_scores(d, mask, self.learner, self.resampling, self.fitting)


def make_wrapper_evaluator(
    learner: LearnerSpec, resampling: ResamplingSpec, fitting: FitSpec
) -> WrapperEvaluator:
    return WrapperEvaluator(learner, resampling, fitting)

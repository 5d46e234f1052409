"""Measure interface: descriptors, score vectors, and the two measure kinds.

Every measure carries a :class:`MeasureDescriptor` (name, maximize flag,
kind).  Set measures score a feature subset jointly through ``evaluate``;
they can also act as individual scorers by evaluating singleton masks.
Individual measures score features one at a time and are rejected wherever a
set measure is required.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from ..dataset import Dataset, FeatureMask, check_mask
from ..errors import ConfigError, DataError


class MeasureKind(Enum):
    INDIVIDUAL = "individual"
    SET = "set"


@dataclass(frozen=True)
class MeasureDescriptor:
    name: str
    maximize: bool
    kind: MeasureKind


@dataclass(frozen=True)
class ScoreVector:
    """Per-feature scores, one entry per requested feature, in request order."""

    entries: tuple[tuple[str, float], ...]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.entries)

    @property
    def scores(self) -> tuple[float, ...]:
        return tuple(s for _, s in self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def worst_value(maximize: bool) -> float:
    return -math.inf if maximize else math.inf


def is_better(a: float, b: float, maximize: bool) -> bool:
    """Strictly better in the measure's orientation."""
    return a > b if maximize else a < b


def is_at_least(a: float, b: float, maximize: bool) -> bool:
    """At least as good in the measure's orientation."""
    return a >= b if maximize else a <= b


class Measure(ABC):
    """Base class; concrete measures set ``descriptor`` at construction."""

    descriptor: MeasureDescriptor

    @abstractmethod
    def score_features(self, d: Dataset, features: Sequence[str] | None = None) -> ScoreVector:
        """Score each requested feature independently (all features if None)."""

    def _resolve_features(self, d: Dataset, features: Sequence[str] | None) -> list[str]:
        names = list(d.feature_names)
        if features is None:
            return names
        known = set(names)
        out = []
        for f in features:
            if f not in known:
                raise DataError(f"unknown feature {f!r}")
            out.append(f)
        if not out:
            raise DataError("empty feature list")
        return out


class IndividualMeasure(Measure):
    """Scores single features; cannot evaluate a subset jointly."""

    descriptor: MeasureDescriptor


class SetMeasure(Measure):
    """Scores a feature subset jointly; also usable as an individual scorer."""

    descriptor: MeasureDescriptor

    @abstractmethod
    def evaluate(self, d: Dataset, mask: FeatureMask) -> float:
        """Score the masked subset.  The mask must select at least one feature."""

    def score_features(self, d: Dataset, features: Sequence[str] | None = None) -> ScoreVector:
        names = self._resolve_features(d, features)
        index = {n: i for i, n in enumerate(d.feature_names)}
        entries = []
        for name in names:
            mask = FeatureMask.from_indices(d.n_features, [index[name]])
            entries.append((name, self.evaluate(d, mask)))
        return ScoreVector(tuple(entries))


def require_set_measure(m: Measure) -> SetMeasure:
    """Reject individual measures where a subset evaluation is required."""
    if not isinstance(m, SetMeasure):
        raise ConfigError(
            f"measure {m.descriptor.name!r} has kind "
            f"{m.descriptor.kind.value!r}; a set measure is required here"
        )
    return m


def checked_mask(d: Dataset, mask: FeatureMask) -> FeatureMask:
    """Width + non-emptiness check applied by every set measure."""
    check_mask(d, mask, require_nonempty=True)
    return mask

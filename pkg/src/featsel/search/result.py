"""Search results, traces, and the evaluation dispatcher shared by all searches."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..dataset import Dataset, FeatureMask, check_mask
from ..measures.base import SetMeasure, is_better, require_set_measure, worst_value


@dataclass(frozen=True)
class TraceEvent:
    """One structured record of a search step; payloads are JSON-ready."""

    iteration: int
    label: str
    payload: dict


@dataclass(frozen=True)
class SearchResult:
    """Outcome of one search run.

    ``best_masks`` holds every distinct mask tied at ``best_value`` that the
    search reports (first-seen order); each re-evaluates to ``best_value``
    bit-exactly.  ``evaluations`` counts measure calls.
    """

    best_masks: tuple[FeatureMask, ...]
    best_value: float
    trace: tuple[TraceEvent, ...]
    evaluations: int
    empty_selection: bool = False

    def __post_init__(self):
        if not self.best_masks:
            raise ValueError("a search result needs at least one mask")


Observer = Callable[[TraceEvent], None]


class TraceRecorder:
    """Collects trace events and forwards them to an optional observer."""

    def __init__(self, observer: Observer | None = None):
        self.events: list[TraceEvent] = []
        self._observer = observer

    def emit(self, iteration: int, label: str, **payload) -> None:
        event = TraceEvent(iteration, label, payload)
        self.events.append(event)
        if self._observer is not None:
            self._observer(event)

    def snapshot(self) -> tuple[TraceEvent, ...]:
        return tuple(self.events)


class Evaluator:
    """Counts measure calls and dispatches batches, optionally on threads.

    Batch results are merged by index order, so the outcome is identical
    whatever the thread count.
    """

    def __init__(self, d: Dataset, measure: SetMeasure, threads: int = 1):
        require_set_measure(measure)
        self.dataset = d
        self.measure = measure
        self.threads = max(1, int(threads))
        self.count = 0

    @property
    def maximize(self) -> bool:
        return self.measure.descriptor.maximize

    def __call__(self, mask: FeatureMask) -> float:
        check_mask(self.dataset, mask, require_nonempty=True)
        self.count += 1
        return self.measure.evaluate(self.dataset, mask)

    def batch(self, masks: Sequence[FeatureMask]) -> list[float]:
        if self.threads > 1 and len(masks) > 1:
            for m in masks:
                check_mask(self.dataset, m, require_nonempty=True)
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                values = list(
                    pool.map(lambda m: self.measure.evaluate(self.dataset, m), masks)
                )
            self.count += len(masks)
            return values
        return [self(m) for m in masks]


class Incumbent:
    """Tracks the best value seen and every distinct mask tied at it."""

    def __init__(self, maximize: bool):
        self.maximize = maximize
        self.value = worst_value(maximize)
        self.masks: list[FeatureMask] = []
        self._seen: set[tuple[int, ...]] = set()

    def update(self, mask: FeatureMask, value: float) -> bool:
        """Record an evaluation; True when it strictly improved the best."""
        if is_better(value, self.value, self.maximize):
            self.value = value
            self.masks = [mask]
            self._seen = {mask.bits}
            return True
        if value == self.value and mask.bits not in self._seen:
            self.masks.append(mask)
            self._seen.add(mask.bits)
        return False

    def update_batch(self, masks: Sequence[FeatureMask], values: Sequence[float]) -> None:
        for m, v in zip(masks, values):
            self.update(m, v)

    @property
    def best_mask(self) -> FeatureMask:
        return self.masks[0]

    def result(self, trace: TraceRecorder, evaluations: int) -> SearchResult:
        return SearchResult(tuple(self.masks), self.value, trace.snapshot(), evaluations)


def argbest(values: Sequence[float], maximize: bool) -> int:
    """Index of the best value; ties resolve to the lowest index."""
    best = 0
    for i in range(1, len(values)):
        if is_better(values[i], values[best], maximize):
            best = i
    return best

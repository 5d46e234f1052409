"""Seeded randomness: one top-level seed, deterministic fan-out to components.

Every stochastic component draws from a PCG64 stream created here.  A run's
top-level seed is combined with a fixed per-component stream id through
``numpy.random.SeedSequence([seed, stream_id])``, so a single seed reproduces
the whole run and components never share a stream.  Shuffles use the explicit
Fisher-Yates loop below, which pins the exact sequence of generator draws.
"""

from __future__ import annotations

from typing import Sequence, TypeVar

import numpy as np

# Stream ids for the seed fan-out.  These are part of the replay contract:
# changing them changes every seeded result.
STREAM_SEARCH = 1
STREAM_CV = 2
STREAM_MEASURE = 3

T = TypeVar("T")


def spawn_rng(seed: int, stream: int = STREAM_SEARCH) -> np.random.Generator:
    """An independent PCG64 generator for (seed, stream)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(stream)]))


def fisher_yates(items: Sequence[T], rng: np.random.Generator) -> list[T]:
    """Classic Fisher-Yates shuffle; one ``integers`` draw per swap."""
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        out[i], out[j] = out[j], out[i]
    return out


def random_nonempty_mask(n: int, rng: np.random.Generator) -> tuple[int, ...]:
    """Uniform random non-empty bit tuple of width n (redraw on empty)."""
    while True:
        bits = tuple(int(b) for b in rng.integers(0, 2, size=n))
        if any(bits):
            return bits

"""Name-addressable measure registry used by the CLI and the search front end."""

from __future__ import annotations

from typing import Callable, Mapping

from ..errors import ConfigError
from .base import Measure
from .individual import ChiSquared, CramerV, FisherScore, Relief
from .subset import (
    BinaryConsistency,
    DeterminationCoefficient,
    GainRatio,
    GiniIndex,
    IEConsistency,
    IEPConsistency,
    MutualInformation,
    RoughsetConsistency,
    SymmetricalUncertainty,
)

_FACTORIES: dict[str, Callable[..., Measure]] = {
    "chiSquared": ChiSquared,
    "cramerV": CramerV,
    "fScore": FisherScore,
    "relief": Relief,
    "binaryConsistency": BinaryConsistency,
    "IEConsistency": IEConsistency,
    "IEPConsistency": IEPConsistency,
    "roughsetConsistency": RoughsetConsistency,
    "mutualInformation": MutualInformation,
    "gainRatio": GainRatio,
    "symmetricalUncertainty": SymmetricalUncertainty,
    "giniIndex": GiniIndex,
    "determinationCoefficient": DeterminationCoefficient,
}

_LOWER = {name.lower(): name for name in _FACTORIES}


def measure_names() -> tuple[str, ...]:
    return tuple(_FACTORIES)


def make_measure(name: str, params: Mapping | None = None) -> Measure:
    """Instantiate a measure by registry name (case-insensitive fallback)."""
    canonical = name if name in _FACTORIES else _LOWER.get(name.lower())
    if canonical is None:
        raise ConfigError(
            f"unknown measure {name!r}; available: {', '.join(sorted(_FACTORIES))}"
        )
    try:
        return _FACTORIES[canonical](**dict(params or {}))
    except TypeError as exc:
        raise ConfigError(f"bad parameters for measure {canonical!r}: {exc}") from exc

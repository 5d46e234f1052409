from .base import (
    IndividualMeasure,
    Measure,
    MeasureDescriptor,
    MeasureKind,
    ScoreVector,
    SetMeasure,
    is_at_least,
    is_better,
    require_set_measure,
    worst_value,
)
from .individual import ChiSquared, CramerV, FisherScore, Relief
from .registry import make_measure, measure_names
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

__all__ = [
    "BinaryConsistency",
    "ChiSquared",
    "CramerV",
    "DeterminationCoefficient",
    "FisherScore",
    "GainRatio",
    "GiniIndex",
    "IEConsistency",
    "IEPConsistency",
    "IndividualMeasure",
    "Measure",
    "MeasureDescriptor",
    "MeasureKind",
    "MutualInformation",
    "Relief",
    "RoughsetConsistency",
    "ScoreVector",
    "SetMeasure",
    "SymmetricalUncertainty",
    "is_at_least",
    "is_better",
    "make_measure",
    "measure_names",
    "require_set_measure",
    "worst_value",
]

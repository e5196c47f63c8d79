"""Core models, constants, configuration and errors."""

from knnn.core.errors import KnnnError
from knnn.core.models import (
    Box,
    EigenPack,
    FeatureMatrix,
    HeatmapGrid,
    LabeledSet,
    NeighborQueryResult,
    PartitionPlan,
    RocResult,
    ScoreConfig,
    ScoreReport,
    SetPacks,
    SymmetricMatrix,
    SynthSpec,
    TrainedModel,
)

__all__ = [
    "KnnnError",
    "Box",
    "EigenPack",
    "FeatureMatrix",
    "HeatmapGrid",
    "LabeledSet",
    "NeighborQueryResult",
    "PartitionPlan",
    "RocResult",
    "ScoreConfig",
    "ScoreReport",
    "SetPacks",
    "SymmetricMatrix",
    "SynthSpec",
    "TrainedModel",
]

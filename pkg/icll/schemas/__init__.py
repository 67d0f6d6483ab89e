from icll.schemas.benchmark import (
    AnalysisConfig,
    BenchmarkConfig,
    BenchmarkReport,
    DatasetFailure,
    DatasetProfile,
)
from icll.schemas.model_file import (
    GroupPayload,
    IcllModelPayload,
    LearnerPayload,
    SavedModel,
    ScalerPayload,
)

__all__ = [
    "AnalysisConfig",
    "BenchmarkConfig",
    "BenchmarkReport",
    "DatasetFailure",
    "DatasetProfile",
    "GroupPayload",
    "IcllModelPayload",
    "LearnerPayload",
    "SavedModel",
    "ScalerPayload",
]
